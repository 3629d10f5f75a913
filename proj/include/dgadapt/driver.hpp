#ifndef DGADAPT_DRIVER_HPP
#define DGADAPT_DRIVER_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgadapt/estimator.hpp"
#include "dgadapt/nonlinear.hpp"
#include "dgadapt/problems.hpp"

namespace dgadapt {

enum class RefinementMode { Uniform, Adaptive };

/// Fully resolved experiment description; -1 / empty fields of the user
/// input are filled from the benchmark defaults in resolve().
struct RunConfig {
  std::string benchmark = "ex1";
  int degree = -1;
  RefinementMode mode = RefinementMode::Adaptive;
  Real theta = -1;
  Real tol = -1;
  Index max_dof = -1;
  int max_levels = -1;
  int initial_nx = -1;
  int initial_ny = -1;
  Real sigma_interior = -1;  // -1 keeps 3k(k+1)
  Real sigma_boundary = -1;  // -1 keeps 6k(k+1)
  Real eps_override = -1;
  Real alpha_override = -1;
  LinearSolverConfig solver;
  NewtonConfig newton;
  std::string out_dir;
  std::string mesh_file;
  unsigned seed = 0;
  bool timings = true;
  // per-level condition estimates of J, S and A in solver_stats.csv
  bool condition_stats = false;

  struct CrossSection {
    Vector2 from, to;
    int samples = 200;
  };
  std::vector<CrossSection> cross_sections;
};

struct LevelReport {
  int level = 0;
  Index nel = 0;
  Index dof = 0;
  Real eta = 0;
  Real data_error = 0;
  std::optional<Real> l2_err;
  std::optional<Real> energy_err;
  int newton_iterations = 0;
  Real avg_krylov = 0;
  bool newton_converged = true;
  Real seconds_assemble = 0;
  Real seconds_reorder = 0;
  Real seconds_factor = 0;
  Real seconds_solve = 0;
  Real seconds_estimate = 0;
  Real seconds_total = 0;
};

enum class RunStatus { Converged, CapReached, Error };

struct SolveReport {
  std::vector<LevelReport> rows;
  RunStatus status = RunStatus::CapReached;
  std::string error;
};

struct RunResult {
  SolveReport report;
  RunConfig resolved;
  std::shared_ptr<Mesh> final_mesh;
  VectorX final_solution;
  std::vector<ErrorIndicators> final_indicators;
};

/// Fills unset fields from the benchmark defaults.
RunConfig resolve_config(RunConfig config);

/// The adaptive loop: solve (Newton + configured linear method), estimate,
/// stop on eta <= tol, else mark (bulk criterion, union over components) and
/// refine by newest-vertex bisection. Uniform mode marks everything.
/// Artifacts are written under config.out_dir when set.
RunResult run_adaptive_loop(const RunConfig& config);

/// report.csv; the timing columns are omitted when with_timings is false.
void write_report_csv(std::ostream& out, const SolveReport& report, bool with_timings);

/// Discontinuous nodal fields in legacy-VTK (ASCII) form, corner values
/// duplicated per triangle.
void write_solution_vtk(std::ostream& out, const DgSpace& space, const VectorX& U);

/// Per-element indicator breakdown (one block of columns per component).
void write_indicators_csv(std::ostream& out, const std::vector<ErrorIndicators>& indicators);

struct CrossSectionSample {
  Real t = 0;  // arc parameter in [0,1]
  Vector2 x;
  std::vector<Real> values;
};

/// Samples u_h along the segment from-to. Points that fall outside every
/// element (within tolerance) are assigned the nearest element's trace.
std::vector<CrossSectionSample> cross_section(const DgSpace& space, const VectorX& U,
                                              const Vector2& from, const Vector2& to,
                                              int samples);

void write_cross_section_csv(std::ostream& out, const std::vector<CrossSectionSample>& samples);

/// The resolved configuration in the flat key = value form configs are read
/// from (a replayable snapshot).
void write_config_snapshot(std::ostream& out, const RunConfig& config);

/// Flat key = value file (# starts a comment). Unknown keys are an error.
void apply_config_file(RunConfig& config, const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// --- parameter sweeps ---

struct PenaltySweepRow {
  Real sigma = 0;
  Real condition = 0;
  Real max_nodal_error = 0;
};

/// Fixed-mesh sweep over the interior penalty value (boundary edges use
/// 2 sigma); reports stiffness condition number and max nodal error.
std::vector<PenaltySweepRow> sweep_penalty(const std::string& benchmark, int degree,
                                           const std::vector<Real>& sigmas, int refine_levels);

struct HSweepRow {
  Real h = 0;
  Index dof = 0;
  Real condition = 0;
};

/// Condition number of the stiffness matrix under uniform refinement.
std::vector<HSweepRow> sweep_h(const std::string& benchmark, int degree, int levels);

void write_penalty_sweep_csv(std::ostream& out, const std::vector<PenaltySweepRow>& rows);
void write_h_sweep_csv(std::ostream& out, const std::vector<HSweepRow>& rows);

}  // namespace dgadapt

#endif
