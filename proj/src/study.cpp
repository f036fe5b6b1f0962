#include "magsolve/study.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "magsolve/errors.hpp"

namespace magsolve {

const CellResult *StudyResult::find(Method m, int order, int h_level) const {
  for (const auto &c : cells)
    if (c.method == m && c.order == order && c.h_level == h_level)
      return &c;
  return nullptr;
}

bool StudyResult::all_converged() const {
  for (const auto &c : cells)
    if (!c.converged())
      return false;
  return true;
}

namespace {

CellResult run_cell(const StudyConfig &config, Method method, int order, int h_level) {
  CellResult cell;
  cell.method = method;
  cell.order = order;
  cell.h_level = h_level;
  const auto start = std::chrono::steady_clock::now();
  try {
    const TriMesh mesh = generate_benchmark_mesh(h_level, config.geometry);
    const DofMap dofmap = build_dofmap(mesh, order);
    const std::vector<MaterialLaw> laws = config.build_laws();
    const SourceSpec source = config.build_source();
    cell.dofs = dofmap.num_dofs;
    cell.free_dofs = dofmap.num_free;

    SolverConfig solver = config.solver;
    solver.method = method;
    cell.certificate = make_certificate(laws, solver);

    const Problem problem{&mesh, &dofmap, &laws, &source};
    cell.state = run(problem, solver);
    cell.iterations = cell.state.outer_iterations;
    cell.reason = cell.state.terminated;
    cell.final_energy = cell.state.final_energy;
  } catch (const std::exception &e) {
    cell.failed = true;
    cell.error = e.what();
  }
  cell.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

std::string cell_entry(const CellResult &cell) {
  if (cell.failed)
    return "error";
  switch (cell.reason) {
  case TerminationReason::Converged:
  case TerminationReason::ZeroDirection:
    return std::to_string(cell.iterations);
  case TerminationReason::MaxIterations:
    return "maxit(" + std::to_string(cell.iterations) + ")";
  }
  return "-";
}

std::string certificate_summary(const ConvergenceCertificate &cert) {
  std::ostringstream out;
  out.precision(6);
  out << "tau_star=" << cert.tau_star << ";1-q=" << 1.0 - cert.q;
  return out.str();
}

} // namespace

StudyResult run_study(const StudyConfig &config, int threads) {
  struct Task {
    Method method;
    int order;
    int h_level;
  };
  std::vector<Task> tasks;
  for (Method m : config.methods)
    for (int p : config.orders)
      for (int k : config.h_levels)
        tasks.push_back({m, p, k});

  StudyResult result;
  result.cells.resize(tasks.size());

  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      result.cells[i] = run_cell(config, tasks[i].method, tasks[i].order, tasks[i].h_level);
    return result;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size())
        return;
      result.cells[i] = run_cell(config, tasks[i].method, tasks[i].order, tasks[i].h_level);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(threads, static_cast<int>(tasks.size()));
  pool.reserve(n);
  for (int t = 0; t < n; ++t)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  return result;
}

std::string summary_csv(const StudyResult &result, const StudyConfig &config) {
  std::ostringstream out;
  out << "# study summary: outer iteration counts per (order, h) cell\n";
  for (Method m : config.methods) {
    for (const auto &c : result.cells) {
      if (c.method == m && !c.failed) {
        out << "# certificate " << to_string(m) << ": ";
        std::istringstream lines(certificate_to_text(c.certificate));
        std::string line;
        bool first = true;
        while (std::getline(lines, line)) {
          out << (first ? "" : " ") << line;
          first = false;
        }
        out << "\n";
        break;
      }
    }
  }

  out << "order";
  for (int p : config.orders)
    for (std::size_t i = 0; i < config.h_levels.size(); ++i)
      out << ",p=" << p;
  out << ",certificate\n";

  out << "h";
  for (std::size_t i = 0; i < config.orders.size(); ++i)
    for (int k : config.h_levels)
      out << ",2^-" << k;
  out << ",\n";

  out << "dof";
  for (int p : config.orders) {
    for (int k : config.h_levels) {
      const CellResult *cell = nullptr;
      for (Method m : config.methods)
        if ((cell = result.find(m, p, k)) != nullptr)
          break;
      out << "," << (cell && !cell->failed ? std::to_string(cell->dofs) : std::string("-"));
    }
  }
  out << ",\n";

  for (Method m : config.methods) {
    out << to_string(m);
    const CellResult *any = nullptr;
    for (int p : config.orders) {
      for (int k : config.h_levels) {
        const CellResult *cell = result.find(m, p, k);
        out << "," << (cell ? cell_entry(*cell) : std::string("-"));
        if (cell && !cell->failed)
          any = cell;
      }
    }
    out << "," << (any ? certificate_summary(any->certificate) : std::string(""));
    out << "\n";
  }
  return out.str();
}

void write_study_outputs(const StudyResult &result, const StudyConfig &config,
                         const std::string &out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out(fs::path(out_dir) / "summary.csv");
    if (!out)
      throw ConfigError("cannot write summary.csv under " + out_dir);
    out << summary_csv(result, config);
  }
  {
    std::ofstream out(fs::path(out_dir) / "timings.csv");
    out << "method,order,h_level,wall_seconds\n";
    out.precision(6);
    for (const auto &c : result.cells)
      out << to_string(c.method) << "," << c.order << "," << c.h_level << "," << c.wall_seconds
          << "\n";
  }
  for (const auto &c : result.cells) {
    if (c.failed)
      continue;
    std::ostringstream name;
    name << "trace_" << to_string(c.method) << "_p" << c.order << "_h" << c.h_level << ".csv";
    write_trace_csv(c.state, (fs::path(out_dir) / name.str()).string());
  }
  for (Method m : config.methods) {
    for (const auto &c : result.cells) {
      if (c.method != m || c.failed)
        continue;
      std::ofstream out(fs::path(out_dir) / ("certificate_" + to_string(m) + ".txt"));
      out << certificate_to_text(c.certificate);
      const CertReport report = check_decay(c.state.trace, c.final_energy, c.certificate);
      out << report_to_text(report);
      break;
    }
  }
}

} // namespace magsolve
