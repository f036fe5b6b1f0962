#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "magsolve/certify.hpp"
#include "magsolve/config.hpp"
#include "magsolve/study.hpp"
#include "magsolve/vtk_export.hpp"

namespace {

using namespace magsolve;

StudyConfig load_config(const std::string &path) {
  if (path.empty())
    return default_benchmark_config();
  return parse_config(path);
}

CellResult solve_cell(const StudyConfig &config, const std::string &method, int h_level,
                      int order) {
  StudyConfig one = config;
  one.methods = {method_from_string(method)};
  one.h_levels = {h_level};
  one.orders = {order};
  StudyResult result = run_study(one);
  return result.cells.front();
}

void print_cell(const CellResult &cell) {
  std::cout << to_string(cell.method) << " p=" << cell.order << " h=2^-" << cell.h_level
            << " dofs=" << cell.dofs;
  if (cell.failed) {
    std::cout << " FAILED: " << cell.error << "\n";
    return;
  }
  std::cout << " iterations=" << cell.iterations << " energy=" << cell.final_energy
            << " (" << to_string(cell.reason) << ", " << cell.wall_seconds << " s)\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"2D nonlinear magnetostatics: generalized gradient descent with "
               "fixed-point, Kacanov and Newton metrics, Armijo backtracking, and "
               "certified contraction factors"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string method = "newton";
  std::string trace_path;
  std::string field_path;
  int h_level = 1;
  int order = 1;
  int threads = 1;

  auto add_common = [&](CLI::App *cmd, bool with_cell) {
    cmd->add_option("--config", config_path, "config file (omit for the bundled benchmark)");
    cmd->add_option("--out", out_dir, "output directory");
    if (with_cell) {
      cmd->add_option("--method", method, "fixedpoint | kacanov | newton");
      cmd->add_option("--h-level", h_level, "refinement level, h = 2^-k");
      cmd->add_option("--order", order, "element order, 1 or 2");
    }
  };

  CLI::App *cmd_solve = app.add_subcommand("solve", "run a single (method, h, p) cell");
  add_common(cmd_solve, true);

  CLI::App *cmd_study = app.add_subcommand("study", "sweep all methods, orders and h levels");
  add_common(cmd_study, false);
  cmd_study->add_option("--threads", threads, "worker threads for independent cells");

  CLI::App *cmd_certify =
      app.add_subcommand("certify", "recompute the certificate and check a stored trace");
  add_common(cmd_certify, true);
  cmd_certify->add_option("--trace", trace_path, "trace CSV written by solve or study")
      ->required();

  CLI::App *cmd_export = app.add_subcommand("export", "solve a cell and write the field as VTK");
  add_common(cmd_export, true);
  cmd_export->add_option("--field", field_path, "output VTK path (default under --out)");

  CLI11_PARSE(app, argc, argv);

  try {
    const StudyConfig config = load_config(config_path);
    namespace fs = std::filesystem;

    if (cmd_solve->parsed()) {
      const CellResult cell = solve_cell(config, method, h_level, order);
      print_cell(cell);
      if (cell.failed)
        return 1;
      fs::create_directories(out_dir);
      std::ostringstream name;
      name << "trace_" << to_string(cell.method) << "_p" << order << "_h" << h_level << ".csv";
      write_trace_csv(cell.state, (fs::path(out_dir) / name.str()).string());
      std::ofstream cert(fs::path(out_dir) / ("certificate_" + to_string(cell.method) + ".txt"));
      cert << certificate_to_text(cell.certificate);
      cert << report_to_text(check_decay(cell.state.trace, cell.final_energy, cell.certificate));
      return cell.converged() ? 0 : 1;
    }

    if (cmd_study->parsed()) {
      const StudyResult result = run_study(config, threads);
      write_study_outputs(result, config, out_dir);
      for (const auto &cell : result.cells)
        print_cell(cell);
      std::cout << "summary written to " << (fs::path(out_dir) / "summary.csv").string() << "\n";
      return result.all_converged() ? 0 : 1;
    }

    if (cmd_certify->parsed()) {
      SolverConfig solver = config.solver;
      solver.method = method_from_string(method);
      const ConvergenceCertificate cert = make_certificate(config.build_laws(), solver);
      const auto [trace, final_energy] = read_trace_csv(trace_path);
      const CertReport report = check_decay(trace, final_energy, cert);
      std::cout << certificate_to_text(cert) << report_to_text(report);
      return report.all_ok() ? 0 : 1;
    }

    if (cmd_export->parsed()) {
      const CellResult cell = solve_cell(config, method, h_level, order);
      print_cell(cell);
      if (cell.failed)
        return 1;
      const TriMesh mesh = generate_benchmark_mesh(h_level, config.geometry);
      const DofMap dofmap = build_dofmap(mesh, order);
      fs::create_directories(out_dir);
      std::string path = field_path;
      if (path.empty()) {
        std::ostringstream name;
        name << "field_" << to_string(cell.method) << "_p" << order << "_h" << h_level << ".vtk";
        path = (fs::path(out_dir) / name.str()).string();
      }
      export_field(mesh, dofmap, scatter_free(dofmap, cell.state.coefficients), path);
      std::cout << "field written to " << path << "\n";
      return cell.converged() ? 0 : 1;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
