#include "dgadapt/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dgadapt {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  Real seconds() const {
    return std::chrono::duration<Real>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Exact L2 transfer of a DG function onto a refinement of its mesh
/// (children lie inside their parents, so degree-k data stays degree k).
VectorX inject_solution(const DgSpace& old_space, const VectorX& U_old, const Mesh& new_mesh,
                        const DgSpace& new_space) {
  VectorX out = VectorX::Zero(new_space.dof());
  const auto& vol = new_space.volume_rule();
  const int nloc = new_space.nloc();
  const int m = new_space.components();
  for (Index t = 0; t < new_mesh.num_triangles(); ++t) {
    const Index p = new_mesh.parent[t] >= 0 ? new_mesh.parent[t] : t;
    const AffineMap& child_map = new_space.map(t);
    const AffineMap& parent_map = old_space.map(p);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = new_space.volume_basis()[q];
      const Vector2 ref_old = parent_map.to_reference(child_map.to_physical(vol.points[q]));
      const auto old_basis = dubiner_tabulate(old_space.degree(), ref_old);
      for (int c = 0; c < m; ++c) {
        Real value = 0;
        for (int l = 0; l < old_space.nloc(); ++l)
          value += U_old[old_space.dof_of(p, c, l)] * old_basis[l].value;
        for (int l = 0; l < nloc; ++l)
          out[new_space.dof_of(t, c, l)] += 8.0 * vol.weights[q] * value * basis[l].value;
      }
    }
  }
  return out;
}

void apply_overrides(DgSpace& space, const RunConfig& config) {
  if (config.sigma_interior > 0) space.sigma_interior = config.sigma_interior;
  if (config.sigma_boundary > 0) space.sigma_boundary = config.sigma_boundary;
}

}  // namespace

RunConfig resolve_config(RunConfig config) {
  const Benchmark bench = benchmark_by_name(config.benchmark);
  if (config.degree < 1) config.degree = bench.defaults.degree;
  if (config.theta <= 0) config.theta = bench.defaults.theta;
  if (config.tol < 0) config.tol = bench.defaults.tol;
  if (config.max_dof < 1) config.max_dof = bench.defaults.max_dof;
  if (config.max_levels < 1) config.max_levels = bench.defaults.max_levels;
  if (config.initial_nx < 1) config.initial_nx = bench.initial_nx;
  if (config.initial_ny < 1) config.initial_ny = bench.initial_ny;
  return config;
}

RunResult run_adaptive_loop(const RunConfig& user_config) {
  const RunConfig config = resolve_config(user_config);
  const Benchmark bench =
      benchmark_by_name(config.benchmark, {config.eps_override, config.alpha_override});
  const int m = bench.problem.m();

  const bool emit = !config.out_dir.empty();
  if (emit) std::filesystem::create_directories(config.out_dir);
  auto artifact = [&config](const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
  };
  if (emit) std::filesystem::remove(artifact("solver_stats.csv"));  // appended per level

  RunResult result;
  result.resolved = config;
  SolveReport& report = result.report;

  Mesh mesh = config.mesh_file.empty()
                  ? bench.make_initial_mesh(config.initial_nx, config.initial_ny)
                  : read_mesh_text_file(config.mesh_file, bench.classifier);

  std::shared_ptr<Mesh> previous_mesh;
  std::unique_ptr<DgSpace> previous_space;
  VectorX previous_solution;

  try {
    for (int level = 0; level < config.max_levels; ++level) {
      auto level_mesh = std::make_shared<Mesh>(mesh);
      DgSpace space(*level_mesh, config.degree, m);
      apply_overrides(space, config);
      if (level > 0 && space.dof() > config.max_dof) {
        report.status = RunStatus::CapReached;
        break;
      }

      Stopwatch level_timer;
      LevelReport row;
      row.level = level;
      row.nel = level_mesh->num_triangles();
      row.dof = space.dof();

      Stopwatch assemble_timer;
      const AssembledSystem system = assemble_system(space, bench.problem);
      row.seconds_assemble = assemble_timer.seconds();

      LinearSolver solver(config.solver);
      NewtonConfig newton = config.newton;
      VectorX guess;
      const VectorX* guess_ptr = nullptr;
      if (newton.initial_guess == NewtonConfig::InitialGuess::PreviousLevel && previous_space) {
        guess = inject_solution(*previous_space, previous_solution, *level_mesh, space);
        guess_ptr = &guess;
      } else if (newton.initial_guess == NewtonConfig::InitialGuess::PreviousLevel) {
        // coarsest level of the warm-start chain
        newton.initial_guess = NewtonConfig::InitialGuess::Linearized;
      }
      auto [U, newton_report] = newton_solve(system, solver, newton, guess_ptr);
      row.newton_iterations = newton_report.iterations;
      row.avg_krylov = newton_report.average_krylov();
      row.newton_converged = newton_report.converged;
      row.seconds_reorder = solver.seconds_reorder;
      row.seconds_factor = solver.seconds_factor;
      row.seconds_solve = solver.seconds_solve;

      Stopwatch estimate_timer;
      const auto indicators = compute_indicators(space, bench.problem, U);
      const DataError data_error = compute_data_error(space, bench.problem, U);
      row.eta = total_eta(indicators);
      row.data_error = data_error.total();
      if (bench.problem.has_exact()) {
        row.l2_err = l2_error(space, bench.problem, U);
        std::vector<Real> kappa(m);
        for (int c = 0; c < m; ++c) kappa[c] = indicators[c].kappa.kappa;
        row.energy_err = energy_error(space, bench.problem, U, kappa);
      }
      row.seconds_estimate = estimate_timer.seconds();
      row.seconds_total = level_timer.seconds();
      report.rows.push_back(row);

      if (emit) {
        char name[64];
        std::snprintf(name, sizeof name, "solution_level%d.vtk", level);
        std::ofstream vtk(artifact(name));
        write_solution_vtk(vtk, space, U);
        std::snprintf(name, sizeof name, "indicators_level%d.csv", level);
        std::ofstream ind(artifact(name));
        write_indicators_csv(ind, indicators);
        if (config.condition_stats) {
          const bool fresh = !std::filesystem::exists(artifact("solver_stats.csv"));
          std::ofstream stats(artifact("solver_stats.csv"), std::ios::app);
          if (fresh)
            stats << "level,method,dof,newton,avg_bicgstab,t_reorder,t_factor,t_solve,"
                     "cond_J,cond_S,cond_A\n";
          const SparseMat J = system.jacobian(U);
          auto [scaled, scaling] = jacobi_scale(J);
          stats << level << "," << solver_method_name(config.solver.method) << ","
                << space.dof() << "," << row.newton_iterations << "," << fmt(row.avg_krylov)
                << "," << fmt(row.seconds_reorder) << "," << fmt(row.seconds_factor) << ","
                << fmt(row.seconds_solve) << "," << fmt(condition_report(scaled));
          if (const BlockFactorization* fact = solver.factorization()) {
            stats << "," << fmt(condition_report(fact->S)) << ","
                  << fmt(condition_report(fact->A));
          } else {
            stats << ",,";
          }
          stats << "\n";
        }
      }

      result.final_mesh = level_mesh;
      result.final_solution = U;
      result.final_indicators = indicators;

      if (!newton_report.converged) {
        report.status = RunStatus::Error;
        report.error = "newton did not converge within max_iter";
        break;
      }
      if (row.eta <= config.tol) {
        report.status = RunStatus::Converged;
        break;
      }
      if (level + 1 >= config.max_levels) {
        report.status = RunStatus::CapReached;
        break;
      }

      std::vector<Index> marked;
      if (config.mode == RefinementMode::Uniform) {
        marked.resize(level_mesh->num_triangles());
        for (Index t = 0; t < level_mesh->num_triangles(); ++t) marked[t] = t;
      } else {
        marked = dorfler_mark(indicators, config.theta);
      }
      mesh = bisect(*level_mesh, marked);

      previous_mesh = level_mesh;
      previous_space = std::make_unique<DgSpace>(*previous_mesh, config.degree, m);
      apply_overrides(*previous_space, config);
      previous_solution = U;
    }
  } catch (const std::exception& e) {
    report.status = RunStatus::Error;
    report.error = e.what();
  }

  if (emit) {
    {
      std::ofstream csv(artifact("report.csv"));
      write_report_csv(csv, report, config.timings);
    }
    {
      std::ofstream snap(artifact("config.resolved"));
      write_config_snapshot(snap, config);
    }
    if (result.final_mesh) {
      DgSpace space(*result.final_mesh, config.degree, m);
      apply_overrides(space, config);
      for (std::size_t i = 0; i < config.cross_sections.size(); ++i) {
        const auto& cs = config.cross_sections[i];
        char name[64];
        std::snprintf(name, sizeof name, "cross_section_%zu.csv", i);
        std::ofstream out(artifact(name));
        write_cross_section_csv(
            out, cross_section(space, result.final_solution, cs.from, cs.to, cs.samples));
      }
      std::ofstream mesh_vtk(artifact("mesh_final.vtk"));
      write_mesh_vtk(mesh_vtk, *result.final_mesh);
    }
  }
  return result;
}

void write_report_csv(std::ostream& out, const SolveReport& report, bool with_timings) {
  out << "level,nel,dof,eta,theta,l2_error,energy_error,newton_iterations,avg_bicgstab,"
         "newton_converged";
  if (with_timings)
    out << ",t_assemble,t_reorder,t_factor,t_solve,t_estimate,t_total";
  out << "\n";
  for (const LevelReport& r : report.rows) {
    out << r.level << "," << r.nel << "," << r.dof << "," << fmt(r.eta) << ","
        << fmt(r.data_error) << "," << (r.l2_err ? fmt(*r.l2_err) : "") << ","
        << (r.energy_err ? fmt(*r.energy_err) : "") << "," << r.newton_iterations << ","
        << fmt(r.avg_krylov) << "," << (r.newton_converged ? 1 : 0);
    if (with_timings)
      out << "," << fmt(r.seconds_assemble) << "," << fmt(r.seconds_reorder) << ","
          << fmt(r.seconds_factor) << "," << fmt(r.seconds_solve) << ","
          << fmt(r.seconds_estimate) << "," << fmt(r.seconds_total);
    out << "\n";
  }
}

void write_solution_vtk(std::ostream& out, const DgSpace& space, const VectorX& U) {
  static const Vector2 corners[3] = {Vector2(0, 0), Vector2(1, 0), Vector2(0, 1)};
  const Mesh& mesh = space.mesh();
  const Index nel = mesh.num_triangles();

  out << "# vtk DataFile Version 3.0\ndgadapt solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 3 * nel << " double\n";
  for (Index t = 0; t < nel; ++t)
    for (int c = 0; c < 3; ++c) {
      const Vector2& v = mesh.vertices[mesh.triangles[t].v[c]];
      out << fmt(v.x()) << " " << fmt(v.y()) << " 0\n";
    }
  out << "CELLS " << nel << " " << 4 * nel << "\n";
  for (Index t = 0; t < nel; ++t)
    out << "3 " << 3 * t << " " << 3 * t + 1 << " " << 3 * t + 2 << "\n";
  out << "CELL_TYPES " << nel << "\n";
  for (Index t = 0; t < nel; ++t) out << "5\n";

  std::vector<std::vector<BasisPoint>> corner_basis;
  for (const Vector2& corner : corners)
    corner_basis.push_back(dubiner_tabulate(space.degree(), corner));

  out << "POINT_DATA " << 3 * nel << "\n";
  for (int comp = 0; comp < space.components(); ++comp) {
    out << "SCALARS u" << comp << " double 1\nLOOKUP_TABLE default\n";
    for (Index t = 0; t < nel; ++t) {
      for (int c = 0; c < 3; ++c) {
        Real v = 0;
        for (int l = 0; l < space.nloc(); ++l)
          v += U[space.dof_of(t, comp, l)] * corner_basis[c][l].value;
        out << fmt(v) << "\n";
      }
    }
  }
}

void write_indicators_csv(std::ostream& out, const std::vector<ErrorIndicators>& indicators) {
  out << "element";
  for (std::size_t c = 0; c < indicators.size(); ++c)
    out << ",eta_sq_c" << c << ",cell_c" << c << ",edge_interior_c" << c << ",edge_dirichlet_c"
        << c << ",edge_neumann_c" << c;
  out << "\n";
  if (indicators.empty()) return;
  const Index nel = static_cast<Index>(indicators[0].cell.size());
  std::vector<VectorX> totals;
  for (const auto& ind : indicators) totals.push_back(ind.total_squared());
  for (Index t = 0; t < nel; ++t) {
    out << t;
    for (std::size_t c = 0; c < indicators.size(); ++c) {
      out << "," << fmt(totals[c][t]) << "," << fmt(indicators[c].cell[t]) << ","
          << fmt(indicators[c].edge_interior[t]) << "," << fmt(indicators[c].edge_dirichlet[t])
          << "," << fmt(indicators[c].edge_neumann[t]);
    }
    out << "\n";
  }
}

std::vector<CrossSectionSample> cross_section(const DgSpace& space, const VectorX& U,
                                              const Vector2& from, const Vector2& to,
                                              int samples) {
  if (samples < 2) throw std::invalid_argument("cross_section: need at least 2 samples");
  const Mesh& mesh = space.mesh();
  std::vector<CrossSectionSample> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const Real t = static_cast<Real>(i) / (samples - 1);
    const Vector2 x = from + t * (to - from);

    // containing element, or the closest one in barycentric defect
    Index best = 0;
    Real best_defect = -1e300;
    Vector2 best_ref;
    for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
      const Vector2 ref = space.map(tri).to_reference(x);
      const Real defect = std::min({ref.x(), ref.y(), 1.0 - ref.x() - ref.y()});
      if (defect > best_defect + 1e-14) {
        best_defect = defect;
        best = tri;
        best_ref = ref;
      }
      if (best_defect >= 0) break;  // strictly inside; lowest id wins ties
    }

    CrossSectionSample sample;
    sample.t = t;
    sample.x = x;
    const auto basis = dubiner_tabulate(space.degree(), best_ref);
    sample.values.resize(space.components());
    for (int c = 0; c < space.components(); ++c) {
      Real v = 0;
      for (int l = 0; l < space.nloc(); ++l)
        v += U[space.dof_of(best, c, l)] * basis[l].value;
      sample.values[c] = v;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

void write_cross_section_csv(std::ostream& out,
                             const std::vector<CrossSectionSample>& samples) {
  out << "t,x,y";
  if (!samples.empty())
    for (std::size_t c = 0; c < samples[0].values.size(); ++c) out << ",u" << c;
  out << "\n";
  for (const auto& s : samples) {
    out << fmt(s.t) << "," << fmt(s.x.x()) << "," << fmt(s.x.y());
    for (Real v : s.values) out << "," << fmt(v);
    out << "\n";
  }
}

void write_config_snapshot(std::ostream& out, const RunConfig& c) {
  out << "benchmark = " << c.benchmark << "\n";
  out << "degree = " << c.degree << "\n";
  out << "mode = " << (c.mode == RefinementMode::Uniform ? "uniform" : "adaptive") << "\n";
  out << "theta = " << fmt(c.theta) << "\n";
  out << "tol = " << fmt(c.tol) << "\n";
  out << "max_dof = " << c.max_dof << "\n";
  out << "max_levels = " << c.max_levels << "\n";
  out << "initial_nx = " << c.initial_nx << "\n";
  out << "initial_ny = " << c.initial_ny << "\n";
  if (c.sigma_interior > 0) out << "sigma_interior = " << fmt(c.sigma_interior) << "\n";
  if (c.sigma_boundary > 0) out << "sigma_boundary = " << fmt(c.sigma_boundary) << "\n";
  if (c.eps_override > 0) out << "eps = " << fmt(c.eps_override) << "\n";
  if (c.alpha_override >= 0) out << "alpha = " << fmt(c.alpha_override) << "\n";
  out << "solver = " << solver_method_name(c.solver.method) << "\n";
  out << "bicgstab_tol = " << fmt(c.solver.krylov_tol) << "\n";
  out << "bicgstab_max_iter = " << c.solver.krylov_max_iter << "\n";
  out << "inner_mode = "
      << (c.solver.inner_mode == SchurInnerMode::IluApply ? "ilu-apply" : "inner-steps") << "\n";
  out << "inner_steps = " << c.solver.inner_steps << "\n";
  out << "newton_max_iter = " << c.newton.max_iter << "\n";
  out << "newton_residual_tol = " << fmt(c.newton.residual_tol) << "\n";
  out << "newton_correction_tol = " << fmt(c.newton.correction_tol) << "\n";
  out << "newton_jacobian = "
      << (c.newton.jacobian_mode == NewtonConfig::JacobianMode::Frozen ? "frozen" : "full")
      << "\n";
  const char* guess = "previous-level";
  if (c.newton.initial_guess == NewtonConfig::InitialGuess::Zero) guess = "zero";
  if (c.newton.initial_guess == NewtonConfig::InitialGuess::Constant) guess = "constant";
  if (c.newton.initial_guess == NewtonConfig::InitialGuess::Linearized) guess = "linearized";
  out << "newton_guess = " << guess << "\n";
  out << "newton_guess_constant = " << fmt(c.newton.guess_constant) << "\n";
  out << "newton_damping = " << (c.newton.damping_guard ? 1 : 0) << "\n";
  if (!c.mesh_file.empty()) out << "mesh_file = " << c.mesh_file << "\n";
  if (!c.out_dir.empty()) out << "out = " << c.out_dir << "\n";
  out << "seed = " << c.seed << "\n";
  out << "timings = " << (c.timings ? 1 : 0) << "\n";
  out << "condition_stats = " << (c.condition_stats ? 1 : 0) << "\n";
  for (const auto& cs : c.cross_sections)
    out << "cross_section = " << fmt(cs.from.x()) << "," << fmt(cs.from.y()) << ","
        << fmt(cs.to.x()) << "," << fmt(cs.to.y()) << "," << cs.samples << "\n";
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  const auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
  auto as_real = [&value, &key]() {
    try {
      return std::stod(value);
    } catch (...) {
      throw std::invalid_argument("config: bad numeric value for " + key);
    }
  };
  auto as_int = [&as_real]() { return static_cast<int>(as_real()); };

  if (key == "benchmark") c.benchmark = value;
  else if (key == "degree") c.degree = as_int();
  else if (key == "mode") {
    if (value == "uniform") c.mode = RefinementMode::Uniform;
    else if (value == "adaptive") c.mode = RefinementMode::Adaptive;
    else throw std::invalid_argument("config: mode must be uniform or adaptive");
  }
  else if (key == "theta") c.theta = as_real();
  else if (key == "tol") c.tol = as_real();
  else if (key == "max_dof") c.max_dof = as_int();
  else if (key == "max_levels") c.max_levels = as_int();
  else if (key == "initial_nx") c.initial_nx = as_int();
  else if (key == "initial_ny") c.initial_ny = as_int();
  else if (key == "sigma_interior") c.sigma_interior = as_real();
  else if (key == "sigma_boundary") c.sigma_boundary = as_real();
  else if (key == "eps") c.eps_override = as_real();
  else if (key == "alpha") c.alpha_override = as_real();
  else if (key == "solver") c.solver.method = solver_method_from_name(value);
  else if (key == "bicgstab_tol") c.solver.krylov_tol = as_real();
  else if (key == "bicgstab_max_iter") c.solver.krylov_max_iter = as_int();
  else if (key == "inner_mode") {
    if (value == "ilu-apply") c.solver.inner_mode = SchurInnerMode::IluApply;
    else if (value == "inner-steps") c.solver.inner_mode = SchurInnerMode::InnerSteps;
    else throw std::invalid_argument("config: inner_mode must be ilu-apply or inner-steps");
  }
  else if (key == "inner_steps") c.solver.inner_steps = as_int();
  else if (key == "newton_max_iter") c.newton.max_iter = as_int();
  else if (key == "newton_residual_tol") c.newton.residual_tol = as_real();
  else if (key == "newton_correction_tol") c.newton.correction_tol = as_real();
  else if (key == "newton_jacobian") {
    if (value == "frozen") c.newton.jacobian_mode = NewtonConfig::JacobianMode::Frozen;
    else if (value == "full") c.newton.jacobian_mode = NewtonConfig::JacobianMode::Full;
    else throw std::invalid_argument("config: newton_jacobian must be frozen or full");
  }
  else if (key == "newton_guess") {
    if (value == "zero") c.newton.initial_guess = NewtonConfig::InitialGuess::Zero;
    else if (value == "constant") c.newton.initial_guess = NewtonConfig::InitialGuess::Constant;
    else if (value == "previous-level")
      c.newton.initial_guess = NewtonConfig::InitialGuess::PreviousLevel;
    else if (value == "linearized")
      c.newton.initial_guess = NewtonConfig::InitialGuess::Linearized;
    else throw std::invalid_argument("config: bad newton_guess");
  }
  else if (key == "newton_guess_constant") c.newton.guess_constant = as_real();
  else if (key == "newton_damping") c.newton.damping_guard = as_int() != 0;
  else if (key == "mesh_file") c.mesh_file = value;
  else if (key == "out") c.out_dir = value;
  else if (key == "seed") c.seed = static_cast<unsigned>(as_int());
  else if (key == "timings") c.timings = as_int() != 0;
  else if (key == "condition_stats") c.condition_stats = as_int() != 0;
  else if (key == "cross_section") {
    RunConfig::CrossSection cs;
    char comma;
    std::istringstream ss(value);
    if (!(ss >> cs.from.x() >> comma >> cs.from.y() >> comma >> cs.to.x() >> comma >>
          cs.to.y() >> comma >> cs.samples))
      throw std::invalid_argument("config: cross_section needs x0,y0,x1,y1,samples");
    c.cross_sections.push_back(cs);
  }
  else throw std::invalid_argument("config: unknown key " + key);
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config " + path + ": line " + std::to_string(lineno) +
                               " is not key = value");
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::vector<PenaltySweepRow> sweep_penalty(const std::string& benchmark, int degree,
                                           const std::vector<Real>& sigmas, int refine_levels) {
  Benchmark bench = benchmark_by_name(benchmark);
  if (!bench.problem.has_exact())
    throw std::invalid_argument("sweep_penalty: benchmark needs an exact solution");
  Mesh mesh = bench.make_initial_mesh();
  for (int i = 0; i < refine_levels; ++i) mesh = uniform_refine(mesh);

  std::vector<PenaltySweepRow> rows;
  for (Real sigma : sigmas) {
    DgSpace space(mesh, degree, bench.problem.m());
    space.sigma_interior = sigma;
    space.sigma_boundary = 2.0 * sigma;
    const AssembledSystem system = assemble_system(space, bench.problem);
    LinearSolver solver({SolverMethod::Direct});
    NewtonConfig newton;
    const auto [U, report] = newton_solve(system, solver, newton);

    PenaltySweepRow row;
    row.sigma = sigma;
    row.condition = condition_report(system.S_csr);
    row.max_nodal_error = max_nodal_error(space, bench.problem, U);
    rows.push_back(row);
  }
  return rows;
}

std::vector<HSweepRow> sweep_h(const std::string& benchmark, int degree, int levels) {
  Benchmark bench = benchmark_by_name(benchmark);
  Mesh mesh = bench.make_initial_mesh();
  std::vector<HSweepRow> rows;
  for (int level = 0; level < levels; ++level) {
    DgSpace space(mesh, degree, bench.problem.m());
    HSweepRow row;
    row.dof = space.dof();
    row.h = 0;
    for (Index t = 0; t < mesh.num_triangles(); ++t) row.h = std::max(row.h, mesh.diameter(t));
    row.condition = condition_report(assemble_stiffness(space, bench.problem).to_csr());
    rows.push_back(row);
    if (level + 1 < levels) mesh = uniform_refine(mesh);
  }
  return rows;
}

void write_penalty_sweep_csv(std::ostream& out, const std::vector<PenaltySweepRow>& rows) {
  out << "sigma,condition,max_nodal_error\n";
  for (const auto& r : rows)
    out << fmt(r.sigma) << "," << fmt(r.condition) << "," << fmt(r.max_nodal_error) << "\n";
}

void write_h_sweep_csv(std::ostream& out, const std::vector<HSweepRow>& rows) {
  out << "h,dof,condition\n";
  for (const auto& r : rows) out << fmt(r.h) << "," << r.dof << "," << fmt(r.condition) << "\n";
}

}  // namespace dgadapt
