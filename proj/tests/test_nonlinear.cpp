#include "dgadapt/nonlinear.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace dgadapt;

namespace {

EdgeKind all_neumann(const Vector2&) { return EdgeKind::neumann(0); }

// single reaction r(u) = u^2 on the unit square, Dirichlet zero
ProblemSpec quadratic_reaction_problem() {
  Component c;
  c.eps = 1.0;
  c.alpha = 1.0;
  c.velocity = [](const Vector2&) { return Vector2(1.0, 1.0); };
  c.div_velocity = [](const Vector2&) { return 0.0; };
  c.source = [](const Vector2&) { return 1.0; };
  ProblemSpec p = ProblemSpec::scalar(std::move(c));
  p.reaction = [](int, const VectorX& u) { return u[0] * u[0]; };
  p.reaction_jacobian = [](int, int, const VectorX& u) { return 2.0 * u[0]; };
  p.dirichlet = [](int, int, const Vector2&) { return 0.0; };
  return p;
}

}  // namespace

TEST_CASE("linear problems converge in exactly one Newton iteration") {
  const Mesh mesh = structured_mesh(0, 0, 1, 1, 2, 2, oracle::all_dirichlet);
  const DgSpace space(mesh, 2);
  Component c;
  c.eps = 1.0;
  c.source = [](const Vector2& x) { return std::sin(x.x()) + x.y(); };
  const ProblemSpec p = ProblemSpec::scalar(std::move(c));
  const AssembledSystem sys = assemble_system(space, p);

  for (auto guess : {NewtonConfig::InitialGuess::Zero, NewtonConfig::InitialGuess::Constant}) {
    LinearSolver solver({SolverMethod::Direct});
    NewtonConfig config;
    config.initial_guess = guess;
    config.guess_constant = 3.0;
    const auto [U, report] = newton_solve(sys, solver, config);
    CHECK(report.converged);
    CHECK(report.iterations == 1);
    CHECK(sys.residual(U).norm() < 1e-10);
    CHECK(report.residual_history.size() == static_cast<std::size_t>(report.iterations + 1));
  }
}

TEST_CASE("iterates match a scalar Newton oracle on the reduced constant-mode system") {
  // pure Neumann, b = 0: the constant mode decouples and the discrete system
  // restricted to it is alpha c M00 + r(c/2) det/4 = f det/4 per element
  const Mesh tri = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}}, all_neumann);
  const DgSpace space(tri, 1);
  Component comp;
  comp.eps = 1.0;
  comp.alpha = 1.0;
  comp.source = [](const Vector2&) { return 2.0; };
  ProblemSpec p = ProblemSpec::scalar(std::move(comp));
  p.reaction = [](int, const VectorX& u) { return u[0] * u[0]; };
  p.reaction_jacobian = [](int, int, const VectorX& u) { return 2.0 * u[0]; };
  const AssembledSystem sys = assemble_system(space, p);

  const Real det = space.map(0).det;
  const Real m00 = det / 8.0;
  const Real c0 = 2.0;  // coefficient of phi_00; u value is c/2
  auto g = [&](Real c) { return c * m00 + (c / 2) * (c / 2) * det / 4.0 - 2.0 * det / 4.0; };
  auto gp = [&](Real c) { return m00 + (c / 2) * det / 4.0; };  // d/dc of g

  SUBCASE("full Newton") {
    LinearSolver solver({SolverMethod::Direct});
    NewtonConfig config;
    config.jacobian_mode = NewtonConfig::JacobianMode::Full;
    config.guess_constant = 1.0;  // lift_constant(1) puts 2.0 on phi_00
    config.max_iter = 12;
    config.residual_tol = 1e-14;
    const auto [U, report] = newton_solve(sys, solver, config);

    Real c = c0;
    for (int it = 0; it < report.iterations; ++it) c = c - g(c) / gp(c);
    CHECK(U[0] == doctest::Approx(c).epsilon(1e-10));
    for (int l = 1; l < space.nloc(); ++l) CHECK(std::abs(U[l]) < 1e-12);
  }

  SUBCASE("frozen Jacobian is the chord method") {
    LinearSolver solver({SolverMethod::Direct});
    NewtonConfig config;
    config.jacobian_mode = NewtonConfig::JacobianMode::Frozen;
    config.guess_constant = 1.0;
    config.max_iter = 25;
    config.residual_tol = 1e-13;
    const auto [U, report] = newton_solve(sys, solver, config);

    Real c = c0;
    const Real slope = gp(c0);
    for (int it = 0; it < report.iterations; ++it) c = c - g(c) / slope;
    CHECK(U[0] == doctest::Approx(c).epsilon(1e-10));
  }
}

TEST_CASE("frozen and full modes agree on the solution") {
  const Mesh mesh = structured_mesh(0, 0, 1, 1, 2, 2, oracle::all_dirichlet);
  const DgSpace space(mesh, 2);
  const ProblemSpec p = quadratic_reaction_problem();
  const AssembledSystem sys = assemble_system(space, p);

  NewtonConfig config;
  config.residual_tol = 1e-10;
  LinearSolver s1({SolverMethod::Direct}), s2({SolverMethod::Direct});
  config.jacobian_mode = NewtonConfig::JacobianMode::Frozen;
  const auto [U_frozen, rep_frozen] = newton_solve(sys, s1, config);
  config.jacobian_mode = NewtonConfig::JacobianMode::Full;
  const auto [U_full, rep_full] = newton_solve(sys, s2, config);

  CHECK(rep_frozen.converged);
  CHECK(rep_full.converged);
  CHECK(rep_full.iterations <= rep_frozen.iterations);

  // both land on the same root: polishing each with two full-Newton steps
  // gives the same limit to near machine precision
  NewtonConfig polish;
  polish.jacobian_mode = NewtonConfig::JacobianMode::Full;
  polish.max_iter = 2;
  polish.residual_tol = 1e-15;
  LinearSolver p1({SolverMethod::Direct}), p2({SolverMethod::Direct});
  const VectorX L_frozen = newton_solve(sys, p1, polish, &U_frozen).first;
  const VectorX L_full = newton_solve(sys, p2, polish, &U_full).first;
  CHECK((L_frozen - L_full).norm() < 1e-12 * (1.0 + L_full.norm()));
  CHECK((U_frozen - L_frozen).norm() < 100.0 * config.residual_tol * (1.0 + L_frozen.norm()));
}

TEST_CASE("full Newton shows superlinear residual decay") {
  const Mesh mesh = structured_mesh(0, 0, 1, 1, 2, 2, oracle::all_dirichlet);
  const DgSpace space(mesh, 1);
  const ProblemSpec p = quadratic_reaction_problem();
  const AssembledSystem sys = assemble_system(space, p);

  LinearSolver solver({SolverMethod::Direct});
  NewtonConfig config;
  config.jacobian_mode = NewtonConfig::JacobianMode::Full;
  config.initial_guess = NewtonConfig::InitialGuess::Constant;
  config.guess_constant = 4.0;  // far enough for several pre-asymptotic steps
  config.residual_tol = 1e-12;
  config.correction_tol = 1e-15;
  const auto [U, report] = newton_solve(sys, solver, config);
  REQUIRE(report.converged);
  REQUIRE(report.iterations >= 3);
  const auto& h = report.residual_history;
  std::vector<Real> ratios;
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > 0) ratios.push_back(h[i] / h[i - 1]);
  REQUIRE(ratios.size() >= 3);
  const std::size_t n = ratios.size();
  CHECK(ratios[n - 1] < ratios[n - 2]);
  CHECK(ratios[n - 2] < ratios[n - 3]);
}

TEST_CASE("identical configurations reproduce identical histories") {
  const Mesh mesh = structured_mesh(0, 0, 1, 1, 2, 2, oracle::all_dirichlet);
  const DgSpace space(mesh, 2);
  const ProblemSpec p = quadratic_reaction_problem();
  const AssembledSystem sys = assemble_system(space, p);

  NewtonConfig config;
  LinearSolver s1({SolverMethod::BlockLUIlu}), s2({SolverMethod::BlockLUIlu});
  const auto [U1, r1] = newton_solve(sys, s1, config);
  const auto [U2, r2] = newton_solve(sys, s2, config);
  CHECK(r1.iterations == r2.iterations);
  REQUIRE(r1.residual_history.size() == r2.residual_history.size());
  for (std::size_t i = 0; i < r1.residual_history.size(); ++i)
    CHECK(r1.residual_history[i] == r2.residual_history[i]);
  CHECK((U1 - U2).norm() == 0.0);
  for (std::size_t i = 0; i < r1.krylov_iterations.size(); ++i)
    CHECK(r1.krylov_iterations[i] == r2.krylov_iterations[i]);
}
