#include "dgadapt/assembly.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace dgadapt;

namespace {

ProblemSpec pure_diffusion(Real eps = 1.0) {
  Component c;
  c.eps = eps;
  return ProblemSpec::scalar(std::move(c));
}

EdgeKind all_neumann(const Vector2&) { return EdgeKind::neumann(0); }

}  // namespace

TEST_CASE("penalty defaults follow 3k(k+1) interior / 6k(k+1) boundary") {
  const Mesh mesh = oracle::unit_square_two_triangles();
  const DgSpace k2(mesh, 2);
  CHECK(k2.sigma_interior == 18.0);
  CHECK(k2.sigma_boundary == 36.0);
  const DgSpace k1(mesh, 1);
  CHECK(k1.sigma_interior == 6.0);
  CHECK(k1.sigma_boundary == 12.0);
}

TEST_CASE("pure diffusion stiffness is symmetric positive definite") {
  const Mesh mesh = oracle::unit_square_two_triangles();
  const DgSpace space(mesh, 1);
  const ProblemSpec problem = pure_diffusion();
  const MatrixX S = MatrixX(assemble_stiffness(space, problem).to_csr());

  const Real scale = S.cwiseAbs().maxCoeff();
  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-12 * scale);

  Eigen::SelfAdjointEigenSolver<MatrixX> es(0.5 * (S + S.transpose()));
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("coercivity proxy holds for k <= 4 on small meshes") {
  std::mt19937 rng(51);
  for (int k = 1; k <= 4; ++k) {
    const Mesh mesh = (k <= 2) ? structured_mesh(0, 0, 1, 1, 4, 4, oracle::all_dirichlet)
                               : structured_mesh(0, 0, 1, 1, 2, 2, oracle::all_dirichlet);
    const DgSpace space(mesh, k);
    const MatrixX S = MatrixX(assemble_stiffness(space, pure_diffusion()).to_csr());
    Eigen::SelfAdjointEigenSolver<MatrixX> es(0.5 * (S + S.transpose()));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("constant function with b=0, alpha=1, Neumann boundary: S u = mass vector") {
  const Mesh mesh = build_topology({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                   {{{0, 1, 2}}, {{0, 2, 3}}}, all_neumann);
  const DgSpace space(mesh, 2);
  Component c;
  c.eps = 1.0;
  c.alpha = 1.0;
  const ProblemSpec problem = ProblemSpec::scalar(std::move(c));
  const auto S = assemble_stiffness(space, problem).to_csr();
  const VectorX one = space.lift_constant(1.0);
  const VectorX Su = S * one;

  // mass vector: int_K phi_a dx = det/4 for the constant mode, 0 otherwise
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Real det = space.map(t).det;
    CHECK(Su[space.dof_of(t, 0, 0)] == doctest::Approx(det / 4.0).epsilon(1e-13));
    for (int l = 1; l < space.nloc(); ++l)
      CHECK(std::abs(Su[space.dof_of(t, 0, l)]) < 1e-13);
  }
}

TEST_CASE("load: zero data gives zero, f=1 gives the mass vector") {
  const Mesh mesh = build_topology({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                   {{{0, 1, 2}}, {{0, 2, 3}}}, all_neumann);
  const DgSpace space(mesh, 1);

  ProblemSpec zero = pure_diffusion();
  CHECK(assemble_load(space, zero).norm() == 0.0);

  Component c;
  c.eps = 1.0;
  c.source = [](const Vector2&) { return 1.0; };
  const ProblemSpec unit_f = ProblemSpec::scalar(std::move(c));
  const VectorX L = assemble_load(space, unit_f);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    CHECK(L[space.dof_of(t, 0, 0)] == doctest::Approx(space.map(t).det / 4.0).epsilon(1e-14));
    for (int l = 1; l < space.nloc(); ++l) CHECK(std::abs(L[space.dof_of(t, 0, l)]) < 1e-14);
  }
}

TEST_CASE("nonlinear assembly: r = 0 and the quadratic reaction hand integral") {
  const Mesh tri = build_topology({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}}, oracle::all_dirichlet);
  const DgSpace space(tri, 2);

  SUBCASE("no reaction term") {
    const ProblemSpec lin = pure_diffusion();
    VectorX h;
    BlockSparseMatrix jr;
    assemble_nonlinear(space, lin, VectorX::Random(space.dof()), &h, &jr);
    CHECK(h.norm() == 0.0);
    CHECK(jr.to_csr().norm() == 0.0);
  }

  SUBCASE("r(u) = u^2 on a constant state") {
    ProblemSpec p = pure_diffusion();
    p.reaction = [](int, const VectorX& u) { return u[0] * u[0]; };
    p.reaction_jacobian = [](int, int, const VectorX& u) { return 2.0 * u[0]; };
    const Real c0 = 1.7;
    VectorX h;
    assemble_nonlinear(space, p, space.lift_constant(c0), &h, nullptr);
    // int_K c0^2 phi_00 = c0^2 * (1/2) * area
    const Real area = tri.area(0);
    CHECK(h[0] == doctest::Approx(c0 * c0 * 0.5 * area).epsilon(1e-14));
    for (int l = 1; l < space.nloc(); ++l) CHECK(std::abs(h[l]) < 1e-15);
  }
}

TEST_CASE("reaction Jacobian matches finite differences of h") {
  std::mt19937 rng(31);
  const Mesh mesh = oracle::unit_square_two_triangles();
  const int m = 2;
  const DgSpace space(mesh, 1, m);
  ProblemSpec p;
  p.components.resize(m);
  p.components[0].eps = p.components[1].eps = 1.0;
  p.reaction = [](int i, const VectorX& u) {
    return i == 0 ? u[0] * u[0] * u[1] : std::sin(u[0]) + u[1] * u[1];
  };
  p.reaction_jacobian = [](int i, int j, const VectorX& u) {
    if (i == 0) return j == 0 ? 2.0 * u[0] * u[1] : u[0] * u[0];
    return j == 0 ? std::cos(u[0]) : 2.0 * u[1];
  };

  std::uniform_real_distribution<Real> unit(-0.5, 0.5);
  VectorX U(space.dof());
  for (Index i = 0; i < U.size(); ++i) U[i] = unit(rng);

  VectorX h0;
  BlockSparseMatrix jr;
  assemble_nonlinear(space, p, U, &h0, &jr);
  const SparseMat J = jr.to_csr();

  const Real delta = 1e-6;
  for (Index j = 0; j < space.dof(); ++j) {
    VectorX Up = U;
    Up[j] += delta;
    VectorX hp;
    assemble_nonlinear(space, p, Up, &hp, nullptr);
    const VectorX fd = (hp - h0) / delta;
    const VectorX col = J.transpose().row(j).transpose();
    CHECK((fd - col).norm() < 1e-5);
  }
}

TEST_CASE("residual identities") {
  const Mesh mesh = oracle::unit_square_two_triangles();
  const DgSpace space(mesh, 2);
  Component c;
  c.eps = 1.0;
  c.alpha = 1.0;
  c.source = [](const Vector2& x) { return std::exp(x.x()) * x.y(); };
  const ProblemSpec problem = ProblemSpec::scalar(std::move(c));
  const AssembledSystem sys = assemble_system(space, problem);

  SUBCASE("zero state: R = -L") {
    const VectorX R = sys.residual(VectorX::Zero(space.dof()));
    CHECK((R + sys.L).norm() == 0.0);
  }

  SUBCASE("R(U) equals the direct matvec bit for bit") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<Real> unit(-1.0, 1.0);
    VectorX U(space.dof());
    for (Index i = 0; i < U.size(); ++i) U[i] = unit(rng);
    const VectorX R = sys.residual(U);
    const VectorX direct = sys.S_csr * U - sys.L;
    for (Index i = 0; i < R.size(); ++i) CHECK(R[i] == direct[i]);
  }

  SUBCASE("dense direct solve zeroes the residual (Galerkin orthogonality)") {
    const VectorX U = oracle::dense_solve(sys.S_csr, sys.L);
    CHECK(sys.residual(U).norm() < 1e-10);
  }

  SUBCASE("dimension mismatch is refused") {
    CHECK_THROWS(sys.residual(VectorX::Zero(3)));
  }
}

TEST_CASE("block pattern stores Nel + 2 * interior edge blocks") {
  std::mt19937 rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    const Mesh mesh = oracle::random_mesh(rng);
    const DgSpace space(mesh, 1);
    const auto S = assemble_stiffness(space, pure_diffusion());
    Index interior = 0;
    for (const Edge& e : mesh.edges)
      if (!e.boundary()) ++interior;
    CHECK(S.stored_blocks() == mesh.num_triangles() + 2 * interior);
  }
}

TEST_CASE("block to_csr preserves entries and the block matvec") {
  std::mt19937 rng(71);
  const Mesh mesh = oracle::random_mesh(rng);
  const DgSpace space(mesh, 2);
  const auto S = assemble_stiffness(space, pure_diffusion());
  const SparseMat csr = S.to_csr();
  // every stored block entry is reproduced by the flat matrix
  for (Index i = 0; i < S.block_rows(); ++i) {
    for (Index j = 0; j < S.block_rows(); ++j) {
      const MatrixX* b = S.find(i, j);
      if (!b) continue;
      for (int r = 0; r < S.block_size(); ++r)
        for (int c = 0; c < S.block_size(); ++c)
          CHECK(csr.coeff(i * S.block_size() + r, j * S.block_size() + c) == (*b)(r, c));
    }
  }
  VectorX x(S.rows());
  std::uniform_real_distribution<Real> unit(-1.0, 1.0);
  for (Index i = 0; i < x.size(); ++i) x[i] = unit(rng);
  CHECK((S.multiply(x) - csr * x).norm() < 1e-12 * x.norm());
}

TEST_CASE("energy norm: zero vector, and continuous functions have no jump part") {
  // Neumann boundary keeps the edge sum free of boundary-trace terms, so a
  // globally continuous v reduces to the weighted H1 norm.
  const Mesh mesh = structured_mesh(0, 0, 1, 1, 2, 2, all_neumann);
  const DgSpace space(mesh, 2);
  Component c;
  c.eps = 0.25;
  c.alpha = 1.0;
  const ProblemSpec problem = ProblemSpec::scalar(std::move(c));
  const std::vector<Real> kappa = {1.0};

  CHECK(energy_norm(space, problem, VectorX::Zero(space.dof()), kappa) == 0.0);

  // v = 2x - 3y + 1 is continuous, so only the weighted H1 part remains;
  // quadrature oracle: eps * |grad v|^2 * |O| + kappa * int v^2.
  const VectorX v = l2_project(space, [](int, const Vector2& x) {
    return 2.0 * x.x() - 3.0 * x.y() + 1.0;
  });
  Real exact_sq = 0.25 * 13.0;  // eps |grad v|^2 over the unit square
  {
    const TriangleRule rule = triangle_rule(6);
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const AffineMap map = affine_map(mesh, t);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Vector2 x = map.to_physical(rule.points[q]);
        const Real val = 2.0 * x.x() - 3.0 * x.y() + 1.0;
        exact_sq += rule.weights[q] * map.det * val * val;
      }
    }
  }
  CHECK(energy_norm(space, problem, v, kappa) ==
        doctest::Approx(std::sqrt(exact_sq)).epsilon(1e-10));
}

TEST_CASE("condition number of the stiffness grows with the penalty parameter") {
  const Mesh mesh = structured_mesh(0, 0, 1, 1, 2, 2, oracle::all_dirichlet);
  Real previous = 0.0;
  for (Real sigma : {15.0, 50.0, 100.0, 500.0, 1000.0}) {
    DgSpace space(mesh, 2);
    space.sigma_interior = sigma;
    space.sigma_boundary = 2.0 * sigma;
    const MatrixX S = MatrixX(assemble_stiffness(space, pure_diffusion()).to_csr());
    const Real cond = oracle::condition_number(S);
    CHECK(cond > previous);
    previous = cond;
  }
}

TEST_CASE("multi-component blocks stay uncoupled without reaction terms") {
  const Mesh mesh = oracle::unit_square_two_triangles();
  const DgSpace space(mesh, 1, 2);
  ProblemSpec p;
  p.components.resize(2);
  p.components[0].eps = 1.0;
  p.components[1].eps = 2.0;
  const auto S = assemble_stiffness(space, p);
  const int nloc = space.nloc();
  for (Index i = 0; i < S.block_rows(); ++i)
    for (Index j = 0; j < S.block_rows(); ++j) {
      const MatrixX* b = S.find(i, j);
      if (!b) continue;
      CHECK(b->block(0, nloc, nloc, nloc).norm() == 0.0);
      CHECK(b->block(nloc, 0, nloc, nloc).norm() == 0.0);
    }
}
