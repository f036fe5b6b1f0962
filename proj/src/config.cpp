#include "magsolve/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "magsolve/errors.hpp"

namespace magsolve {

std::vector<MaterialLaw> StudyConfig::build_laws() const {
  const auto names = geometry.region_names();
  std::vector<MaterialLaw> laws;
  laws.reserve(names.size());
  for (const auto &name : names) {
    const auto it = materials.find(name);
    if (it == materials.end()) {
      laws.push_back(MaterialLaw::linear(nu0));
      continue;
    }
    const MaterialSpec &spec = it->second;
    switch (spec.kind) {
    case MaterialSpec::Kind::Linear:
      laws.push_back(MaterialLaw::linear(spec.nu));
      break;
    case MaterialSpec::Kind::PermanentMagnet:
      laws.push_back(MaterialLaw::permanent_magnet(spec.nu, spec.remanence));
      break;
    case MaterialSpec::Kind::Spline: {
      const auto data = spec.csv_path.empty() ? bundled_bh_curve() : load_bh_csv(spec.csv_path);
      laws.push_back(MaterialLaw::isotropic_spline(MonotoneSpline::build(data), s_max));
      break;
    }
    }
  }
  return laws;
}

SourceSpec StudyConfig::build_source() const {
  const auto names = geometry.region_names();
  SourceSpec source = SourceSpec::zero(static_cast<int>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = sources.find(names[i]);
    if (it != sources.end())
      source.current_density[i] = it->second;
  }
  return source;
}

namespace {

struct Line {
  std::string section;
  std::string key;
  std::string value;
  int number;
};

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos)
    return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<Line> tokenize(const std::string &text, std::ostringstream &bad) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw, section;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';')
      continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        bad << "line " << number << ": unterminated section header\n";
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad << "line " << number << ": expected key = value\n";
      continue;
    }
    lines.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), number});
  }
  return lines;
}

bool parse_double(const std::string &s, double &out) {
  std::istringstream ss(s);
  return static_cast<bool>(ss >> out) && ss.eof();
}

bool parse_int(const std::string &s, int &out) {
  std::istringstream ss(s);
  return static_cast<bool>(ss >> out) && ss.eof();
}

} // namespace

StudyConfig parse_config_text(const std::string &text) {
  std::ostringstream bad;
  StudyConfig cfg;
  cfg.geometry.regions.clear();
  bool have_methods = false, have_h = false, have_orders = false;

  for (const Line &line : tokenize(text, bad)) {
    std::istringstream val(line.value);
    if (line.section == "geometry") {
      if (line.key == "base_division") {
        if (!parse_int(line.value, cfg.geometry.base_division))
          bad << "line " << line.number << ": base_division must be an integer\n";
      } else if (line.key == "rect") {
        RegionRect r;
        if (val >> r.name >> r.rect.xmin >> r.rect.ymin >> r.rect.xmax >> r.rect.ymax)
          cfg.geometry.regions.push_back(r);
        else
          bad << "line " << line.number << ": rect needs 'name xmin ymin xmax ymax'\n";
      } else {
        bad << "line " << line.number << ": unknown geometry key '" << line.key << "'\n";
      }
    } else if (line.section == "materials") {
      MaterialSpec spec;
      std::string kind;
      val >> kind;
      if (kind == "linear") {
        spec.kind = MaterialSpec::Kind::Linear;
        if (!(val >> spec.nu))
          bad << "line " << line.number << ": linear material needs a reluctivity\n";
      } else if (kind == "spline") {
        spec.kind = MaterialSpec::Kind::Spline;
        std::string path;
        if (val >> path && path != "builtin")
          spec.csv_path = path;
      } else if (kind == "permanent_magnet") {
        spec.kind = MaterialSpec::Kind::PermanentMagnet;
        if (!(val >> spec.nu >> spec.remanence.bx >> spec.remanence.by))
          bad << "line " << line.number << ": permanent_magnet needs 'nu br_x br_y'\n";
      } else {
        bad << "line " << line.number << ": unknown material kind '" << kind << "'\n";
        continue;
      }
      cfg.materials[line.key] = spec;
    } else if (line.section == "source") {
      double j = 0.0;
      if (parse_double(line.value, j))
        cfg.sources[line.key] = j;
      else
        bad << "line " << line.number << ": source value must be a number\n";
    } else if (line.section == "solver") {
      double d = 0.0;
      int i = 0;
      if (line.key == "rho" && parse_double(line.value, d)) cfg.solver.rho = d;
      else if (line.key == "sigma" && parse_double(line.value, d)) cfg.solver.sigma = d;
      else if (line.key == "epsilon" && parse_double(line.value, d)) cfg.solver.epsilon = d;
      else if (line.key == "nu_bar" && parse_double(line.value, d)) cfg.solver.nu_bar = d;
      else if (line.key == "linear_tol" && parse_double(line.value, d)) cfg.solver.linear_tol = d;
      else if (line.key == "s_max" && parse_double(line.value, d)) cfg.s_max = d;
      else if (line.key == "max_outer_iterations" && parse_int(line.value, i))
        cfg.solver.max_outer_iterations = i;
      else if (line.key == "max_backtracks" && parse_int(line.value, i))
        cfg.solver.max_backtracks = i;
      else if (line.key == "linear_max_it" && parse_int(line.value, i))
        cfg.solver.linear_max_it = i;
      else if (line.key == "linear_solver") {
        if (line.value == "direct") cfg.solver.use_direct_solver = true;
        else if (line.value == "cg") cfg.solver.use_direct_solver = false;
        else bad << "line " << line.number << ": linear_solver must be 'direct' or 'cg'\n";
      } else {
        bad << "line " << line.number << ": bad solver entry '" << line.key << " = "
            << line.value << "'\n";
      }
    } else if (line.section == "study") {
      if (line.key == "h_levels") {
        cfg.h_levels.clear();
        have_h = true;
        int level = 0;
        while (val >> level)
          cfg.h_levels.push_back(level);
      } else if (line.key == "orders") {
        cfg.orders.clear();
        have_orders = true;
        int p = 0;
        while (val >> p)
          cfg.orders.push_back(p);
      } else if (line.key == "methods") {
        cfg.methods.clear();
        have_methods = true;
        std::string name;
        while (val >> name) {
          try {
            cfg.methods.push_back(method_from_string(name));
          } catch (const ConfigError &) {
            bad << "line " << line.number << ": unknown method '" << name << "'\n";
          }
        }
      } else {
        bad << "line " << line.number << ": unknown study key '" << line.key << "'\n";
      }
    } else if (line.section.empty()) {
      bad << "line " << line.number << ": key outside any section\n";
    } else {
      bad << "line " << line.number << ": unknown section '" << line.section << "'\n";
    }
  }

  // Required keys and cross-field validation. Everything gets reported in
  // one pass.
  if (cfg.geometry.regions.empty()) {
    bad << "missing required [geometry] section with at least one 'rect = name xmin ymin "
           "xmax ymax' entry\n";
  } else {
    try {
      cfg.geometry.validate();
    } catch (const ConfigError &e) {
      bad << e.what();
    }
    for (const auto &[name, spec] : cfg.materials) {
      (void)spec;
      bool known = false;
      for (const auto &r : cfg.geometry.regions)
        known = known || r.name == name;
      if (!known)
        bad << "material given for unknown region '" << name << "'\n";
    }
    for (const auto &[name, j] : cfg.sources) {
      (void)j;
      bool known = false;
      for (const auto &r : cfg.geometry.regions)
        known = known || r.name == name;
      if (!known)
        bad << "source given for unknown region '" << name << "'\n";
    }
  }
  try {
    cfg.solver.validate();
  } catch (const ConfigError &e) {
    bad << e.what();
  }
  if (have_h && cfg.h_levels.empty())
    bad << "study: h_levels list is empty\n";
  for (int k : cfg.h_levels)
    if (k < 0)
      bad << "study: h_level " << k << " is negative\n";
  if (have_orders && cfg.orders.empty())
    bad << "study: orders list is empty\n";
  for (int p : cfg.orders)
    if (p != 1 && p != 2)
      bad << "study: order " << p << " is not supported (only 1 and 2)\n";
  if (have_methods && cfg.methods.empty())
    bad << "study: methods list is empty\n";
  if (!(cfg.s_max > 0.0))
    bad << "solver: s_max must be positive\n";

  const std::string msg = bad.str();
  if (!msg.empty())
    throw ConfigError("invalid configuration:\n" + msg);
  return cfg;
}

StudyConfig parse_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string serialize_config(const StudyConfig &cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[geometry]\n";
  out << "base_division = " << cfg.geometry.base_division << "\n";
  for (const auto &r : cfg.geometry.regions)
    out << "rect = " << r.name << " " << r.rect.xmin << " " << r.rect.ymin << " " << r.rect.xmax
        << " " << r.rect.ymax << "\n";

  out << "\n[materials]\n";
  for (const auto &[name, spec] : cfg.materials) {
    out << name << " = ";
    switch (spec.kind) {
    case MaterialSpec::Kind::Linear:
      out << "linear " << spec.nu;
      break;
    case MaterialSpec::Kind::Spline:
      out << "spline " << (spec.csv_path.empty() ? "builtin" : spec.csv_path);
      break;
    case MaterialSpec::Kind::PermanentMagnet:
      out << "permanent_magnet " << spec.nu << " " << spec.remanence.bx << " "
          << spec.remanence.by;
      break;
    }
    out << "\n";
  }

  out << "\n[source]\n";
  for (const auto &[name, j] : cfg.sources)
    out << name << " = " << j << "\n";

  out << "\n[solver]\n";
  out << "rho = " << cfg.solver.rho << "\n";
  out << "sigma = " << cfg.solver.sigma << "\n";
  out << "epsilon = " << cfg.solver.epsilon << "\n";
  out << "nu_bar = " << cfg.solver.nu_bar << "\n";
  out << "max_outer_iterations = " << cfg.solver.max_outer_iterations << "\n";
  out << "max_backtracks = " << cfg.solver.max_backtracks << "\n";
  out << "linear_tol = " << cfg.solver.linear_tol << "\n";
  out << "linear_max_it = " << cfg.solver.linear_max_it << "\n";
  out << "linear_solver = " << (cfg.solver.use_direct_solver ? "direct" : "cg") << "\n";
  out << "s_max = " << cfg.s_max << "\n";

  out << "\n[study]\n";
  out << "h_levels =";
  for (int k : cfg.h_levels)
    out << " " << k;
  out << "\norders =";
  for (int p : cfg.orders)
    out << " " << p;
  out << "\nmethods =";
  for (Method m : cfg.methods)
    out << " " << to_string(m);
  out << "\n";
  return out.str();
}

StudyConfig default_benchmark_config() {
  StudyConfig cfg;
  cfg.geometry = benchmark_geometry();
  cfg.materials["iron"] = MaterialSpec{MaterialSpec::Kind::Spline, nu0, {}, ""};
  cfg.materials["air"] = MaterialSpec{MaterialSpec::Kind::Linear, nu0, {}, ""};
  cfg.materials["coil_pos"] = MaterialSpec{MaterialSpec::Kind::Linear, nu0, {}, ""};
  cfg.materials["coil_neg"] = MaterialSpec{MaterialSpec::Kind::Linear, nu0, {}, ""};
  cfg.sources["coil_pos"] = 6.25e5;
  cfg.sources["coil_neg"] = -6.25e5;
  cfg.solver.nu_bar = 4.0e5;  // minimizer of a one-time geometric scan on the coarsest mesh
  return cfg;
}

} // namespace magsolve
