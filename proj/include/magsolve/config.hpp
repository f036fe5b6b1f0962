#ifndef MAGSOLVE_CONFIG_HPP
#define MAGSOLVE_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "magsolve/assembly.hpp"
#include "magsolve/descent.hpp"
#include "magsolve/geometry.hpp"
#include "magsolve/material.hpp"

namespace magsolve {

/// Material assignment for one region, as written in the config file.
struct MaterialSpec {
  enum class Kind { Linear, Spline, PermanentMagnet };
  Kind kind = Kind::Linear;
  double nu = nu0;
  Flux2 remanence;        ///< permanent magnet only
  std::string csv_path;   ///< spline only; empty means the bundled curve
};

/// Full problem + sweep description read from a flat INI-like file with
/// [geometry], [materials], [source], [solver] and [study] sections.
struct StudyConfig {
  GeometrySpec geometry;
  std::map<std::string, MaterialSpec> materials;  ///< by region name; default: linear vacuum
  std::map<std::string, double> sources;          ///< current density by region name; default 0
  SolverConfig solver;                            ///< method field is set per run
  double s_max = 3.0;                             ///< flux range for bound certification (T)
  std::vector<int> h_levels = {1, 2, 3};
  std::vector<int> orders = {1, 2};
  std::vector<Method> methods = {Method::FixedPoint, Method::Kacanov, Method::Newton};

  /// Laws indexed by RegionId, bounds certified over [0, s_max].
  std::vector<MaterialLaw> build_laws() const;
  SourceSpec build_source() const;
};

/// Parse and validate; throws ConfigError listing every violation at once.
StudyConfig parse_config(const std::string &path);
StudyConfig parse_config_text(const std::string &text);

/// Canonical text form; parse_config_text(serialize_config(c)) reproduces c.
std::string serialize_config(const StudyConfig &config);

/// The bundled desk-scale benchmark: C-core with coil, bundled saturation
/// curve in the iron, current density +-6.25e5 A/m^2 in the coil limbs.
StudyConfig default_benchmark_config();

} // namespace magsolve

#endif
