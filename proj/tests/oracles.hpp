// Test-only helpers: dense oracles, finite differences, random generators.
// Kept independent of the library's solve paths.
#ifndef DGADAPT_TESTS_ORACLES_HPP
#define DGADAPT_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <random>

#include "dgadapt/mesh.hpp"
#include "dgadapt/types.hpp"

namespace oracle {

using dgadapt::Index;
using dgadapt::MatrixX;
using dgadapt::Real;
using dgadapt::SparseMat;
using dgadapt::Vector2;
using dgadapt::VectorX;

inline VectorX dense_solve(const MatrixX& A, const VectorX& b) {
  return Eigen::FullPivLU<MatrixX>(A).solve(b);
}

inline VectorX dense_solve(const SparseMat& A, const VectorX& b) {
  return dense_solve(MatrixX(A), b);
}

inline Real condition_number(const MatrixX& A) {
  Eigen::JacobiSVD<MatrixX> svd(A);
  return svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
}

template <typename F>
Real fd_derivative(F&& f, Real x, Real h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline dgadapt::EdgeKind all_dirichlet(const Vector2&) { return dgadapt::EdgeKind::dirichlet(0); }

inline dgadapt::Mesh unit_square_two_triangles() {
  return dgadapt::build_topology({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                 {{{0, 1, 2}}, {{0, 2, 3}}}, all_dirichlet);
}

/// Random valid conforming mesh: jittered structured grid with random
/// diagonal orientation per cell.
inline dgadapt::Mesh random_mesh(std::mt19937& rng, int max_div = 4) {
  std::uniform_int_distribution<int> div(1, max_div);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  const int nx = div(rng), ny = div(rng);
  std::vector<Vector2> vertices;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      Real x = static_cast<Real>(i) / nx, y = static_cast<Real>(j) / ny;
      if (i > 0 && i < nx) x += (unit(rng) - 0.5) * 0.3 / nx;
      if (j > 0 && j < ny) y += (unit(rng) - 0.5) * 0.3 / ny;
      vertices.emplace_back(x, y);
    }
  auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  std::vector<std::array<Index, 3>> tris;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (unit(rng) < 0.5) {
        tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        tris.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        tris.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  return dgadapt::build_topology(std::move(vertices), std::move(tris), all_dirichlet);
}

}  // namespace oracle

#endif
