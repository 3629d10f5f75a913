#ifndef DGADAPT_BASIS_HPP
#define DGADAPT_BASIS_HPP

#include <vector>

#include "dgadapt/mesh.hpp"
#include "dgadapt/quadrature.hpp"
#include "dgadapt/types.hpp"

namespace dgadapt {

/// Jacobi polynomial P_n^{(a,b)} at x, standard normalization
/// (P_0 = 1, P_1^{(0,0)}(x) = x), via the three-term recurrence.
Real jacobi_eval(int a, int b, int n, Real x);

/// Derivative d/dx P_n^{(a,b)}(x) = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}(x).
Real jacobi_deriv(int a, int b, int n, Real x);

struct BasisPoint {
  Real value = 0;
  Vector2 grad = Vector2::Zero();
  Real hxx = 0, hxy = 0, hyy = 0;  // second derivatives
};

/// Orthogonal modal basis function phi_{mn} on the reference triangle,
/// scaled so that the reference mass matrix is (1/8) * identity. Evaluation
/// runs through a polynomial recurrence in (x1, x2), so the collapsed vertex
/// x2 = 1 needs no special handling.
BasisPoint dubiner_eval(int m, int n, const Vector2& point);

/// Number of basis functions of total degree <= k.
inline int dubiner_count(int k) { return (k + 1) * (k + 2) / 2; }

/// Graded-lexicographic position of (m, n): ordered by (m+n, m).
inline int dubiner_index(int m, int n) {
  const int d = m + n;
  return d * (d + 1) / 2 + m;
}

/// All basis values/gradients/Hessians of degree <= k at one point,
/// in dubiner_index order.
std::vector<BasisPoint> dubiner_tabulate(int k, const Vector2& point);

/// Affine map x = B x_ref + shift from the reference triangle onto a
/// physical triangle (reference vertices map to the stored vertex order).
struct AffineMap {
  Matrix2 linear = Matrix2::Identity();
  Vector2 shift = Vector2::Zero();
  Real det = 1;                          // > 0 for CCW triangles
  Matrix2 inv_t = Matrix2::Identity();   // B^{-T}, maps reference gradients

  Vector2 to_physical(const Vector2& ref) const { return linear * ref + shift; }
  Vector2 to_reference(const Vector2& phys) const {
    return inv_t.transpose() * (phys - shift);
  }
};

AffineMap affine_map(const Vector2& v0, const Vector2& v1, const Vector2& v2);
AffineMap affine_map(const Mesh& mesh, Index tri);

/// Broken polynomial space of degree k on a triangulation. Each basis
/// function is supported on a single triangle; dof = Nel * Nloc * m for
/// an m-component system (component-major within the element block).
class DgSpace {
 public:
  DgSpace(const Mesh& mesh, int degree, int components = 1);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  int nloc() const { return nloc_; }
  Index dof() const { return static_cast<Index>(mesh_->triangles.size()) * nloc_ * components_; }

  Index dof_of(Index element, int component, int local) const {
    return (element * components_ + component) * nloc_ + local;
  }

  // Penalty weights; defaults follow sigma = 3k(k+1) on interior edges and
  // 6k(k+1) on boundary edges.
  Real sigma_interior;
  Real sigma_boundary;
  Real sigma(const Edge& e) const {
    return e.kind.is_interior() ? sigma_interior : sigma_boundary;
  }

  const AffineMap& map(Index element) const { return maps_[element]; }
  Real diameter(Index element) const { return diameters_[element]; }

  // --- volume quadrature cache (shared reference tabulation) ---
  const TriangleRule& volume_rule() const { return volume_rule_; }
  // [q][basis]
  const std::vector<std::vector<BasisPoint>>& volume_basis() const { return volume_basis_; }

  // --- edge quadrature cache ---
  // Traces are tabulated at the reference preimages of the edge Gauss nodes;
  // nodes walk the edge from its stored first to second vertex, so both
  // adjacent elements see the same physical points. Indexed
  // [local_edge][orientation][q][basis] with orientation = 1 when the stored
  // edge direction is reversed relative to the element's local edge.
  const IntervalRule& edge_rule() const { return edge_rule_; }
  const std::vector<BasisPoint>& edge_basis(int local_edge, int orientation, int q) const {
    return edge_basis_[(local_edge * 2 + orientation) * static_cast<int>(edge_rule_.points.size()) + q];
  }

  /// Orientation flag of edge e as seen from side (element, local edge).
  int edge_orientation(const Edge& e, int side) const;

  /// u_h value at a reference point of one element (single component).
  Real evaluate(const VectorX& coeffs, Index element, int component, const Vector2& ref) const;
  Vector2 evaluate_gradient(const VectorX& coeffs, Index element, int component,
                            const Vector2& ref) const;

  /// Coefficient vector representing the constant c on every element.
  VectorX lift_constant(Real c) const;

 private:
  const Mesh* mesh_;
  int degree_;
  int components_;
  int nloc_;
  std::vector<AffineMap> maps_;
  std::vector<Real> diameters_;
  TriangleRule volume_rule_;
  IntervalRule edge_rule_;
  std::vector<std::vector<BasisPoint>> volume_basis_;
  std::vector<std::vector<BasisPoint>> edge_basis_;  // flattened [le][o][q]
};

}  // namespace dgadapt

#endif
