#ifndef DGADAPT_PROBLEMS_HPP
#define DGADAPT_PROBLEMS_HPP

#include <array>
#include <string>
#include <vector>

#include "dgadapt/problem.hpp"

namespace dgadapt {

struct RunDefaults {
  Real theta = 0.5;
  Real tol = 1e-3;
  int degree = 2;
  Index max_dof = 80000;
  int max_levels = 30;
};


/// A named problem instance: PDE data, domain, boundary classification,
/// initial mesh coarseness and default run parameters.
struct Benchmark {
  std::string name;
  ProblemSpec problem;
  std::array<Real, 4> domain{0, 0, 1, 1};  // x0, y0, x1, y1
  int initial_nx = 2;
  int initial_ny = 2;
  BoundaryClassifier classifier;
  RunDefaults defaults;

  Mesh make_initial_mesh() const;
  Mesh make_initial_mesh(int nx, int ny) const;
};

/// Coefficient overrides; negative values keep the benchmark's published
/// numbers. Manufactured sources and exact solutions are rebuilt from the
/// overridden values, so the data stays consistent.
struct BenchmarkParams {
  Real eps = -1;
  Real alpha = -1;
};

/// Quadratic reaction with an interior layer along 2 x1 - x2 = 1/4;
/// exact solution known.
Benchmark ex_polynomial(const BenchmarkParams& params = {});

/// Monod-type reaction, rotational convection field; no exact solution.
Benchmark ex_monod(const BenchmarkParams& params = {});

/// Two-component Arrhenius kinetics in a channel flow. The boundary data are
/// not part of the primary reference and follow the cited source's setup as
/// transcribed in the bundled config; quantitative checks are not attached
/// to this benchmark.
Benchmark ex_arrhenius(const BenchmarkParams& params = {});

/// Two components coupled by 50 u1^2 u2^2 on (0,1) x (0,2), hat-shaped
/// inflow data on the top boundary.
Benchmark ex_coupled_polynomial(const BenchmarkParams& params = {});

/// Linear convection-dominated problem with an arctan internal layer;
/// exact solution known.
Benchmark ex_linear_layer(const BenchmarkParams& params = {});

/// Poisson with u = sin(pi x1) sin(pi x2); used by the penalty and mesh-size
/// sweeps.
Benchmark ex_poisson_penalty(const BenchmarkParams& params = {});

const std::vector<std::string>& benchmark_names();
Benchmark benchmark_by_name(const std::string& name, const BenchmarkParams& params = {});

/// Verifies that the stored exact solution satisfies the PDE at sampled
/// points (tight tolerance away from layers, relaxed inside them where the
/// terms cancel catastrophically). Throws on failure. Runs automatically
/// when a benchmark with an exact solution is constructed.
void registration_self_check(const Benchmark& benchmark);

}  // namespace dgadapt

#endif
