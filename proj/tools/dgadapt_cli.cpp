// Experiment driver: runs the adaptive solve loop and the penalty/mesh-size
// sweeps from the command line.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dgadapt/driver.hpp"

namespace {

using dgadapt::Real;
using dgadapt::RunConfig;

struct KeyValueOptions {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> entries;

  void add(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { entries.emplace_back(key, v); }, help);
  }

  RunConfig build() const {
    RunConfig config;
    if (!config_file.empty()) dgadapt::apply_config_file(config, config_file);
    for (const auto& [key, value] : entries) dgadapt::apply_config_entry(config, key, value);
    return config;
  }
};

std::vector<Real> parse_list(const std::string& text) {
  std::vector<Real> values;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) values.push_back(std::stod(token));
  return values;
}

int run_solve(const KeyValueOptions& options) {
  const dgadapt::RunResult result = dgadapt::run_adaptive_loop(options.build());
  for (const auto& row : result.report.rows) {
    std::printf("level %2d  nel %6d  dof %7d  eta %.6e", row.level, row.nel, row.dof, row.eta);
    if (row.l2_err) std::printf("  l2 %.6e", *row.l2_err);
    std::printf("  newton %d  bicgstab %.1f\n", row.newton_iterations, row.avg_krylov);
  }
  switch (result.report.status) {
    case dgadapt::RunStatus::Converged:
      std::printf("converged: eta below tolerance\n");
      return 0;
    case dgadapt::RunStatus::CapReached:
      std::printf("stopped: dof/level cap reached before the tolerance\n");
      return 2;
    case dgadapt::RunStatus::Error:
      std::fprintf(stderr, "error: %s\n", result.report.error.c_str());
      return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive interior-penalty DG solver for convection-dominated "
               "diffusion-convection-reaction systems"};
  app.require_subcommand(1);

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "Run the adaptive (or uniform) refinement loop");
  KeyValueOptions opt;
  solve->add_option("--config", opt.config_file, "flat key = value config file");
  opt.add(solve, "--benchmark", "benchmark", "one of: ex1 ex2 ex3 ex4 linear poisson");
  opt.add(solve, "--degree", "degree", "polynomial degree k >= 1");
  opt.add(solve, "--mode", "mode", "uniform | adaptive");
  opt.add(solve, "--theta", "theta", "bulk marking fraction in (0,1)");
  opt.add(solve, "--tol", "tol", "stop when the estimator drops below this");
  opt.add(solve, "--solver", "solver",
          "unpermuted | m1 | m2 | blocklu | blocklu-ilu | direct");
  opt.add(solve, "--max-dof", "max_dof", "degree-of-freedom cap");
  opt.add(solve, "--max-levels", "max_levels", "refinement level cap");
  opt.add(solve, "--out", "out", "artifact directory");
  opt.add(solve, "--mesh", "mesh_file", "plain-text initial mesh override");
  opt.add(solve, "--initial-nx", "initial_nx", "initial mesh cells in x");
  opt.add(solve, "--initial-ny", "initial_ny", "initial mesh cells in y");
  opt.add(solve, "--sigma-interior", "sigma_interior", "interior penalty override");
  opt.add(solve, "--sigma-boundary", "sigma_boundary", "boundary penalty override");
  opt.add(solve, "--eps", "eps", "diffusion override (all components)");
  opt.add(solve, "--alpha", "alpha", "linear reaction override (all components)");
  opt.add(solve, "--bicgstab-tol", "bicgstab_tol", "Krylov relative residual");
  opt.add(solve, "--bicgstab-max-iter", "bicgstab_max_iter", "Krylov iteration cap");
  opt.add(solve, "--inner-mode", "inner_mode", "ilu-apply | inner-steps (M1/M2 inner solves)");
  opt.add(solve, "--inner-steps", "inner_steps", "inner BiCGStab budget for M1/M2");
  opt.add(solve, "--newton-max-iter", "newton_max_iter", "Newton iteration cap");
  opt.add(solve, "--newton-tol", "newton_residual_tol", "Newton relative residual tolerance");
  opt.add(solve, "--newton-jacobian", "newton_jacobian", "frozen | full");
  opt.add(solve, "--newton-guess", "newton_guess", "zero | constant | previous-level");
  opt.add(solve, "--seed", "seed", "seed recorded in the config snapshot");
  opt.add(solve, "--cross-section", "cross_section",
          "x0,y0,x1,y1,samples (repeatable) profile along a segment");
  solve->add_flag_callback(
      "--no-timings", [&opt] { opt.entries.emplace_back("timings", "0"); },
      "omit timing columns from report.csv (byte-stable replays)");
  solve->add_flag_callback(
      "--condition-stats", [&opt] { opt.entries.emplace_back("condition_stats", "1"); },
      "estimate cond(J), cond(S), cond(A) per level into solver_stats.csv");

  // --- sweep-penalty ---
  auto* sweep_p = app.add_subcommand(
      "sweep-penalty", "Condition number and max nodal error over penalty values");
  std::string sp_benchmark = "poisson", sp_sigmas = "2,6,18,50,100,200,500,1000", sp_out;
  int sp_degree = 2, sp_levels = 2;
  sweep_p->add_option("--benchmark", sp_benchmark, "benchmark with an exact solution");
  sweep_p->add_option("--degree", sp_degree, "polynomial degree");
  sweep_p->add_option("--sigma-list", sp_sigmas, "comma-separated interior penalty values");
  sweep_p->add_option("--refine-levels", sp_levels, "uniform refinements of the initial mesh");
  sweep_p->add_option("--out", sp_out, "directory for penalty_sweep.csv (default: stdout)");

  // --- sweep-h ---
  auto* sweep_hh = app.add_subcommand("sweep-h", "Condition number under uniform refinement");
  std::string sh_benchmark = "poisson", sh_out;
  int sh_degree = 2, sh_levels = 4;
  sweep_hh->add_option("--benchmark", sh_benchmark, "benchmark name");
  sweep_hh->add_option("--degree", sh_degree, "polynomial degree");
  sweep_hh->add_option("--levels", sh_levels, "number of uniform levels");
  sweep_hh->add_option("--out", sh_out, "directory for h_sweep.csv (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(opt);
    if (sweep_p->parsed()) {
      const auto rows = dgadapt::sweep_penalty(sp_benchmark, sp_degree, parse_list(sp_sigmas),
                                               sp_levels);
      if (sp_out.empty()) {
        dgadapt::write_penalty_sweep_csv(std::cout, rows);
      } else {
        std::filesystem::create_directories(sp_out);
        std::ofstream out(std::filesystem::path(sp_out) / "penalty_sweep.csv");
        dgadapt::write_penalty_sweep_csv(out, rows);
      }
      return 0;
    }
    if (sweep_hh->parsed()) {
      const auto rows = dgadapt::sweep_h(sh_benchmark, sh_degree, sh_levels);
      if (sh_out.empty()) {
        dgadapt::write_h_sweep_csv(std::cout, rows);
      } else {
        std::filesystem::create_directories(sh_out);
        std::ofstream out(std::filesystem::path(sh_out) / "h_sweep.csv");
        dgadapt::write_h_sweep_csv(out, rows);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
