#ifndef MAGSOLVE_STUDY_HPP
#define MAGSOLVE_STUDY_HPP

#include <string>
#include <vector>

#include "magsolve/certify.hpp"
#include "magsolve/config.hpp"

namespace magsolve {

/// Outcome of one (method, h, p) cell of the sweep.
struct CellResult {
  Method method = Method::Newton;
  int h_level = 0;
  int order = 1;
  int dofs = 0;
  int free_dofs = 0;
  int iterations = 0;
  TerminationReason reason = TerminationReason::MaxIterations;
  double final_energy = 0.0;
  double wall_seconds = 0.0;
  DescentState state;
  ConvergenceCertificate certificate;
  bool failed = false;      ///< an exception was caught; error holds the message
  std::string error;

  bool converged() const { return !failed && reason == TerminationReason::Converged; }
};

struct StudyResult {
  std::vector<CellResult> cells;  ///< method-major, then order, then h_level

  const CellResult *find(Method m, int order, int h_level) const;
  bool all_converged() const;
};

/// Run every (method, order, h_level) cell of the sweep. Cells are
/// independent; threads > 1 distributes them over a worker pool. A cell
/// failure is recorded in its result and does not abort the sweep.
StudyResult run_study(const StudyConfig &config, int threads = 1);

/// Iteration-count table mirroring the reference layout (rows: dof and one
/// per method; columns: one per (order, h) cell) with certificate text in
/// the header and an extra trailing certificate column. Deterministic:
/// contains no timings.
std::string summary_csv(const StudyResult &result, const StudyConfig &config);

/// summary.csv, timings.csv, per-cell trace CSVs and per-method certificate
/// files under out_dir (created if missing).
void write_study_outputs(const StudyResult &result, const StudyConfig &config,
                         const std::string &out_dir);

} // namespace magsolve

#endif
