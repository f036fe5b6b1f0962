#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "magsolve/config.hpp"
#include "magsolve/errors.hpp"

using namespace magsolve;

namespace {

const char *minimal_config = R"(
[geometry]
base_division = 4
rect = air 0 0 1 1
)";

const char *full_config = R"(
# desk problem
[geometry]
base_division = 4
rect = air 0 0 1 1
rect = iron 0.25 0.25 0.5 0.75
rect = coil 0.5 0.25 0.75 0.75

[materials]
air = linear 795774.715459477
iron = spline builtin
coil = linear 795774.715459477

[source]
coil = 6.25e5

[solver]
rho = 0.5
sigma = 0.1
epsilon = 1e-7
nu_bar = 4e5
linear_solver = direct

[study]
h_levels = 0 1
orders = 1 2
methods = newton kacanov
)";

} // namespace

TEST_CASE("an empty config reports the missing required keys") {
  try {
    parse_config_text("");
    FAIL("expected a ConfigError");
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("geometry") != std::string::npos);
    CHECK(msg.find("rect") != std::string::npos);
  }
}

TEST_CASE("a minimal config gets the documented defaults") {
  const StudyConfig cfg = parse_config_text(minimal_config);
  CHECK(cfg.solver.rho == 0.5);
  CHECK(cfg.solver.sigma == 0.1);
  CHECK(cfg.solver.epsilon == 1e-7);
  CHECK(cfg.solver.linear_tol == 1e-10);
  CHECK(cfg.solver.use_direct_solver);
  CHECK(cfg.s_max == 3.0);
  CHECK(cfg.h_levels == std::vector<int>{1, 2, 3});
  CHECK(cfg.orders == std::vector<int>{1, 2});
  REQUIRE(cfg.methods.size() == 3);

  // regions without material entries default to linear vacuum
  const auto laws = cfg.build_laws();
  REQUIRE(laws.size() == 1);
  CHECK(laws[0].gamma_bound() == doctest::Approx(nu0));
  const SourceSpec src = cfg.build_source();
  CHECK(src.at(0) == 0.0);
}

TEST_CASE("configs round-trip through their canonical serialization") {
  for (const char *text : {minimal_config, full_config}) {
    const StudyConfig cfg = parse_config_text(text);
    const std::string canon = serialize_config(cfg);
    const StudyConfig reparsed = parse_config_text(canon);
    CHECK(serialize_config(reparsed) == canon);
  }
  const std::string canon = serialize_config(default_benchmark_config());
  CHECK(serialize_config(parse_config_text(canon)) == canon);
}

TEST_CASE("a full config parses into the expected structure") {
  const StudyConfig cfg = parse_config_text(full_config);
  CHECK(cfg.geometry.base_division == 4);
  CHECK(cfg.geometry.regions.size() == 3);
  CHECK(cfg.materials.at("iron").kind == MaterialSpec::Kind::Spline);
  CHECK(cfg.materials.at("iron").csv_path.empty());
  CHECK(cfg.sources.at("coil") == doctest::Approx(6.25e5));
  CHECK(cfg.solver.nu_bar == doctest::Approx(4e5));
  CHECK(cfg.h_levels == std::vector<int>{0, 1});
  REQUIRE(cfg.methods.size() == 2);
  CHECK(cfg.methods[0] == Method::Newton);
  CHECK(cfg.methods[1] == Method::Kacanov);

  const auto laws = cfg.build_laws();
  REQUIRE(laws.size() == 3);
  CHECK(laws[cfg.geometry.region_id("iron")].L_bound() >
        laws[cfg.geometry.region_id("iron")].gamma_bound());
}

TEST_CASE("sigma outside the admissible range is rejected") {
  const std::string text = std::string(minimal_config) + "\n[solver]\nsigma = 0.6\n";
  try {
    parse_config_text(text);
    FAIL("expected a ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("sigma") != std::string::npos);
  }
}

TEST_CASE("every violation is listed in one error") {
  const std::string text = R"(
[geometry]
base_division = 4
rect = air 0 0 1 1
rect = iron 0.3 0.3 bad-value 0.7

[materials]
ether = linear 100

[solver]
rho = 2.0
sigma = 0.6

[study]
orders = 3

[mystery]
key = value
)";
  try {
    parse_config_text(text);
    FAIL("expected a ConfigError");
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("rect needs") != std::string::npos);
    CHECK(msg.find("ether") != std::string::npos);
    CHECK(msg.find("rho") != std::string::npos);
    CHECK(msg.find("sigma") != std::string::npos);
    CHECK(msg.find("order 3") != std::string::npos);
    CHECK(msg.find("mystery") != std::string::npos);
  }
}

TEST_CASE("spline material from a CSV file path") {
  const std::string path = "test_config_bh.csv";
  {
    std::ofstream out(path);
    out << "0,0\n0.5,250\n1.0,800\n2.0,4000\n";
  }
  const std::string text = std::string(minimal_config) + "\n[materials]\nair = spline " + path + "\n";
  const StudyConfig cfg = parse_config_text(text);
  CHECK(cfg.materials.at("air").csv_path == path);
  const auto laws = cfg.build_laws();
  CHECK(laws[0].gamma_bound() > 0.0);
  std::remove(path.c_str());
}

TEST_CASE("unknown region references and bad geometry are caught") {
  const std::string text = R"(
[geometry]
base_division = 4
rect = air 0 0 1 1
rect = iron 0.26 0.25 0.5 0.75

[source]
phantom = 100
)";
  try {
    parse_config_text(text);
    FAIL("expected a ConfigError");
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("phantom") != std::string::npos);
    CHECK(msg.find("grid") != std::string::npos);  // 0.26 off the 1/4 grid
  }
}

TEST_CASE("the bundled benchmark config is valid and solvable in principle") {
  const StudyConfig cfg = default_benchmark_config();
  cfg.geometry.validate();
  cfg.solver.validate();
  const auto laws = cfg.build_laws();
  CHECK(laws.size() == 4);
  const SourceSpec src = cfg.build_source();
  CHECK(src.at(cfg.geometry.region_id("coil_pos")) == doctest::Approx(6.25e5));
  CHECK(src.at(cfg.geometry.region_id("coil_neg")) == doctest::Approx(-6.25e5));
  CHECK(src.at(cfg.geometry.region_id("air")) == 0.0);
  CHECK(cfg.solver.nu_bar > 0.0);
}

TEST_CASE("config file loading") {
  const std::string path = "test_config_file.ini";
  {
    std::ofstream out(path);
    out << full_config;
  }
  const StudyConfig cfg = parse_config(path);
  CHECK(cfg.geometry.regions.size() == 3);
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_config("missing_config.ini"), ConfigError);
}
