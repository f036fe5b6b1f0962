#include "magsolve/descent.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "magsolve/errors.hpp"

namespace magsolve {

std::string to_string(Method m) {
  switch (m) {
  case Method::FixedPoint: return "fixedpoint";
  case Method::Kacanov: return "kacanov";
  case Method::Newton: return "newton";
  }
  return "unknown";
}

Method method_from_string(const std::string &name) {
  if (name == "fixedpoint" || name == "fixed-point")
    return Method::FixedPoint;
  if (name == "kacanov")
    return Method::Kacanov;
  if (name == "newton")
    return Method::Newton;
  throw ConfigError("unknown method: " + name);
}

std::string to_string(TerminationReason r) {
  switch (r) {
  case TerminationReason::Converged: return "converged";
  case TerminationReason::MaxIterations: return "max_iterations";
  case TerminationReason::ZeroDirection: return "zero_direction";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  std::ostringstream bad;
  if (!(rho > 0.0 && rho < 1.0))
    bad << "solver: rho must be in (0, 1)\n";
  if (!(sigma > 0.0 && sigma < 0.5))
    bad << "solver: sigma must be in (0, 1/2)\n";
  if (!(epsilon > 0.0))
    bad << "solver: epsilon must be positive\n";
  if (method == Method::FixedPoint && !(nu_bar > 0.0))
    bad << "solver: fixed-point method needs nu_bar > 0\n";
  if (max_outer_iterations < 1)
    bad << "solver: max_outer_iterations must be >= 1\n";
  if (max_backtracks < 1)
    bad << "solver: max_backtracks must be >= 1\n";
  if (!(linear_tol > 0.0))
    bad << "solver: linear_tol must be positive\n";
  const std::string msg = bad.str();
  if (!msg.empty())
    throw ConfigError(msg);
}

MetricChoice SolverConfig::metric_choice() const {
  switch (method) {
  case Method::FixedPoint: return FixedPointMetric{nu_bar};
  case Method::Kacanov: return KacanovMetric{};
  case Method::Newton: return NewtonMetric{};
  }
  return NewtonMetric{};
}

namespace {

double dot(const DenseVector &a, const DenseVector &b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += a[i] * b[i];
  return acc;
}

std::pair<DenseVector, LinearSolveReport> solve_update(const CsrMatrix &K, const DenseVector &rhs,
                                                       const SolverConfig &config,
                                                       DirectSolver *cached) {
  if (config.use_direct_solver) {
    if (!cached->ready())
      cached->factorize(K);
    return cached->solve(K, rhs);
  }
  auto [x, report] = cg_solve(K, rhs, config.linear_tol, config.linear_max_it);
  if (!report.converged) {
    std::ostringstream msg;
    msg << "update solve did not converge: " << report.iterations
        << " iterations, relative residual " << report.relative_residual;
    throw NumericalError(msg.str());
  }
  return {std::move(x), report};
}

DenseVector negate(DenseVector v) {
  for (double &x : v)
    x = -x;
  return v;
}

} // namespace

std::pair<DenseVector, LinearSolveReport> compute_direction(const Problem &problem,
                                                            const SolverConfig &config,
                                                            const std::vector<double> &free_coeffs) {
  config.validate();
  const auto full = scatter_free(*problem.dofmap, free_coeffs);
  CsrMatrix K = assemble_metric(*problem.mesh, *problem.dofmap, full, config.metric_choice(),
                                *problem.laws);
  const DenseVector rhs =
      negate(assemble_residual(*problem.mesh, *problem.dofmap, full, *problem.laws, *problem.source));
  DirectSolver direct;
  return solve_update(K, rhs, config, &direct);
}

namespace {

struct ArmijoResult {
  double tau;
  int backtracks;
  double trial_energy;  ///< energy at the accepted trial point
};

ArmijoResult armijo_search(const Problem &problem, const SolverConfig &config,
                           const std::vector<double> &free_coeffs, const DenseVector &direction,
                           double energy, double directional_derivative) {
  std::vector<double> trial(free_coeffs.size());
  double tau = 1.0;
  for (int k = 0; k <= config.max_backtracks; ++k) {
    for (std::size_t i = 0; i < trial.size(); ++i)
      trial[i] = free_coeffs[i] + tau * direction[i];
    const double trial_energy =
        total_energy(*problem.mesh, *problem.dofmap, scatter_free(*problem.dofmap, trial),
                     *problem.laws, *problem.source);
    if (trial_energy <= energy + config.sigma * tau * directional_derivative)
      return {tau, k, trial_energy};
    tau *= config.rho;
  }
  throw NumericalError("Armijo backtracking exhausted: the direction does not give "
                       "sufficient decrease, gradient or metric bounds are suspect");
}

} // namespace

std::pair<double, int> armijo_stepsize(const Problem &problem, const SolverConfig &config,
                                       const std::vector<double> &free_coeffs,
                                       const DenseVector &direction, double energy,
                                       double directional_derivative) {
  const ArmijoResult r =
      armijo_search(problem, config, free_coeffs, direction, energy, directional_derivative);
  return {r.tau, r.backtracks};
}

DescentState run(const Problem &problem, const SolverConfig &config, std::vector<double> a0) {
  config.validate();
  const DofMap &dm = *problem.dofmap;
  if (a0.empty())
    a0.assign(dm.num_free, 0.0);
  if (static_cast<int>(a0.size()) != dm.num_free)
    throw std::invalid_argument("run: initial iterate has wrong length");

  DescentState state;
  state.coefficients = std::move(a0);

  CsrMatrix K = build_free_pattern(*problem.mesh, dm);
  auto full = scatter_free(dm, state.coefficients);

  // Reference scale shared by all methods: the first Newton step at a0,
  // measured in the Newton metric at a0.
  assemble_metric_into(K, *problem.mesh, dm, full, NewtonMetric{}, *problem.laws);
  DenseVector residual =
      assemble_residual(*problem.mesh, dm, full, *problem.laws, *problem.source);
  {
    DirectSolver reference_direct;
    auto [delta_ref, rep] = solve_update(K, negate(residual), config, &reference_direct);
    (void)rep;
    state.termination_scale = energy_norm(K, delta_ref);
  }

  double energy = total_energy(*problem.mesh, dm, full, *problem.laws, *problem.source);
  state.final_energy = energy;

  // A direction is numerically zero once it falls below the linear solver's
  // own resolution relative to the problem scale. The iterate's own curl
  // norm backs the scale up when a0 already sits at the minimizer and the
  // reference step degenerates.
  const double zero_threshold = std::max(1e-14, config.linear_tol) *
                                std::max(state.termination_scale,
                                         energy_norm(K, state.coefficients));

  const MetricChoice metric = config.metric_choice();
  const bool metric_is_constant = std::holds_alternative<FixedPointMetric>(metric);
  DirectSolver direct;

  for (int n = 0; n < config.max_outer_iterations; ++n) {
    if (!metric_is_constant || state.metric_assemblies == 0) {
      assemble_metric_into(K, *problem.mesh, dm, full, metric, *problem.laws);
      ++state.metric_assemblies;
      if (!metric_is_constant)
        direct = DirectSolver{};  // drop the stale factorization
    }
    if (n > 0)
      residual = assemble_residual(*problem.mesh, dm, full, *problem.laws, *problem.source);

    auto [delta, report] = solve_update(K, negate(residual), config, &direct);
    const double dirderiv = dot(residual, delta);
    const double increment = energy_norm(K, delta);

    if (increment <= zero_threshold || dirderiv >= 0.0) {
      state.terminated = TerminationReason::ZeroDirection;
      if (state.trace.empty())
        state.trace.push_back({n, energy, dirderiv, 1.0, 0, increment, report.iterations});
      break;
    }

    const ArmijoResult step =
        armijo_search(problem, config, state.coefficients, delta, energy, dirderiv);

    if (!(step.trial_energy < energy)) {
      // The true decrease fell below the resolution of the energy value:
      // converged at working precision, the trial step is discarded.
      state.terminated = TerminationReason::Converged;
      if (state.trace.empty())
        state.trace.push_back({n, energy, dirderiv, step.tau, step.backtracks, increment,
                               report.iterations});
      break;
    }

    for (std::size_t i = 0; i < state.coefficients.size(); ++i)
      state.coefficients[i] += step.tau * delta[i];
    full = scatter_free(dm, state.coefficients);

    state.trace.push_back({n, energy, dirderiv, step.tau, step.backtracks, increment,
                           report.iterations});
    ++state.outer_iterations;

    const bool converged =
        std::abs(step.trial_energy - energy) < config.epsilon * state.termination_scale;
    energy = step.trial_energy;
    state.final_energy = energy;
    if (converged) {
      state.terminated = TerminationReason::Converged;
      break;
    }
    if (n + 1 == config.max_outer_iterations)
      state.terminated = TerminationReason::MaxIterations;
  }
  return state;
}

void write_trace_csv(const DescentState &state, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot open trace output file: " + path);
  out.precision(17);
  out << "# final_energy " << state.final_energy << "\n";
  out << "# terminated " << to_string(state.terminated) << "\n";
  out << "# termination_scale " << state.termination_scale << "\n";
  out << "n,energy,tau,backtracks,increment_norm,linear_iterations\n";
  for (const auto &r : state.trace)
    out << r.n << "," << r.energy << "," << r.tau << "," << r.backtracks << ","
        << r.increment_norm << "," << r.linear_iterations << "\n";
}

std::pair<std::vector<IterationRecord>, double> read_trace_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open trace file: " + path);
  std::vector<IterationRecord> trace;
  double final_energy = 0.0;
  bool have_final = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "final_energy") {
        ss >> final_energy;
        have_final = true;
      }
      continue;
    }
    if (line.rfind("n,", 0) == 0)
      continue;  // column header
    for (char &c : line)
      if (c == ',')
        c = ' ';
    std::istringstream ss(line);
    IterationRecord r;
    if (ss >> r.n >> r.energy >> r.tau >> r.backtracks >> r.increment_norm >> r.linear_iterations)
      trace.push_back(r);
    else
      throw ConfigError("malformed trace line: '" + line + "'");
  }
  if (!have_final)
    throw ConfigError("trace file is missing the final_energy header: " + path);
  return {trace, final_energy};
}

} // namespace magsolve
