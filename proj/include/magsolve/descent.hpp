#ifndef MAGSOLVE_DESCENT_HPP
#define MAGSOLVE_DESCENT_HPP

#include <string>
#include <vector>

#include "magsolve/assembly.hpp"

namespace magsolve {

enum class Method { FixedPoint, Kacanov, Newton };

std::string to_string(Method m);
Method method_from_string(const std::string &name);

struct SolverConfig {
  Method method = Method::Newton;
  double nu_bar = 0.0;  ///< fixed-point reluctivity; required for Method::FixedPoint
  double rho = 0.5;     ///< backtracking factor, 0 < rho < 1
  double sigma = 0.1;   ///< sufficient-decrease factor, 0 < sigma < 1/2
  double epsilon = 1e-7;
  int max_outer_iterations = 20000;
  int max_backtracks = 60;
  double linear_tol = 1e-10;
  int linear_max_it = 200000;
  bool use_direct_solver = true;

  void validate() const;  ///< throws ConfigError on violated parameter ranges
  MetricChoice metric_choice() const;
};

/// One accepted step of the outer iteration. energy is the value before the
/// step; a terminal zero-direction record keeps the current energy with
/// tau = 1 and no backtracks.
struct IterationRecord {
  int n = 0;
  double energy = 0.0;
  double directional_derivative = 0.0;  ///< r^T delta, nonpositive for a descent direction
  double tau = 1.0;
  int backtracks = 0;
  double increment_norm = 0.0;  ///< ||curl delta|| in the current metric
  int linear_iterations = 0;
};

enum class TerminationReason { Converged, MaxIterations, ZeroDirection };

std::string to_string(TerminationReason r);

struct Problem {
  const TriMesh *mesh = nullptr;
  const DofMap *dofmap = nullptr;
  const std::vector<MaterialLaw> *laws = nullptr;
  const SourceSpec *source = nullptr;
};

struct DescentState {
  std::vector<double> coefficients;  ///< free-dof values of the final iterate
  std::vector<IterationRecord> trace;
  TerminationReason terminated = TerminationReason::MaxIterations;
  double final_energy = 0.0;
  /// Norm of the first Newton step in the Newton metric at a0; the shared
  /// termination scale for all methods. Note the termination test compares
  /// an energy difference against epsilon times this norm, so the two sides
  /// carry different physical units; that is the method's stated rule and is
  /// reproduced as written.
  double termination_scale = 0.0;
  int metric_assemblies = 0;  ///< descent-metric assemblies (1 for fixed-point)
  int outer_iterations = 0;   ///< accepted steps
};

/// Search direction at the given iterate: solve
/// <nu curl delta, curl v> = -residual for all free dofs. Assembles the
/// metric of config.method at the iterate. Throws NumericalError if the
/// linear solver does not converge.
std::pair<DenseVector, LinearSolveReport> compute_direction(const Problem &problem,
                                                            const SolverConfig &config,
                                                            const std::vector<double> &free_coeffs);

/// Largest tau = rho^k with
/// Phi(a + tau delta) <= Phi(a) + sigma tau (r^T delta).
/// Throws NumericalError once max_backtracks is exceeded.
std::pair<double, int> armijo_stepsize(const Problem &problem, const SolverConfig &config,
                                       const std::vector<double> &free_coeffs,
                                       const DenseVector &direction, double energy,
                                       double directional_derivative);

/// Run the generalized gradient descent from a0 (empty = zeros) until the
/// energy difference drops below epsilon times the first-Newton-step norm,
/// the direction degenerates, or max_outer_iterations is hit. The
/// fixed-point metric is assembled and factorized exactly once per run.
DescentState run(const Problem &problem, const SolverConfig &config,
                 std::vector<double> a0 = {});

/// Trace as CSV with columns n,energy,tau,backtracks,increment_norm,linear_iterations.
void write_trace_csv(const DescentState &state, const std::string &path);

/// Read back a trace CSV written by write_trace_csv; the second member is the
/// final energy taken from the "# final_energy" header comment.
std::pair<std::vector<IterationRecord>, double> read_trace_csv(const std::string &path);

} // namespace magsolve

#endif
