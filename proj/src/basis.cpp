#include "dgadapt/basis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace dgadapt {

Real jacobi_eval(int a, int b, int n, Real x) {
  if (n == 0) return 1.0;
  Real p_prev = 1.0;
  Real p = 0.5 * (a - b) + 0.5 * (a + b + 2) * x;
  for (int k = 2; k <= n; ++k) {
    const Real s = 2.0 * k + a + b;
    const Real c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const Real c2 = (s - 1.0) * (static_cast<Real>(a) * a - static_cast<Real>(b) * b);
    const Real c3 = (s - 1.0) * s * (s - 2.0);
    const Real c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const Real p_next = ((c2 + c3 * x) * p - c4 * p_prev) / c1;
    p_prev = p;
    p = p_next;
  }
  return p;
}

Real jacobi_deriv(int a, int b, int n, Real x) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1) * jacobi_eval(a + 1, b + 1, n - 1, x);
}

namespace {

struct ScalarJet {
  Real v = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
};

// chi_m(x,y) = (1-y)^m P_m(2x/(1-y) - 1) expanded as a polynomial via the
// Legendre recurrence: (m+1) chi_{m+1} = (2m+1) a chi_m - m b chi_{m-1}
// with a = 2x + y - 1, b = (1-y)^2.
void collapsed_legendre(int kmax, Real x, Real y, std::vector<ScalarJet>& chi) {
  chi.resize(kmax + 1);
  const Real a = 2.0 * x + y - 1.0;
  const Real b = (1.0 - y) * (1.0 - y);
  const Real by = -2.0 * (1.0 - y);  // db/dy; d2b/dy2 = 2

  chi[0] = {1.0, 0, 0, 0, 0, 0};
  if (kmax == 0) return;
  chi[1] = {a, 2.0, 1.0, 0, 0, 0};
  for (int m = 1; m < kmax; ++m) {
    const ScalarJet& c = chi[m];
    const ScalarJet& p = chi[m - 1];
    const Real f = 2.0 * m + 1.0;
    ScalarJet n;
    n.v = (f * a * c.v - m * b * p.v) / (m + 1.0);
    n.dx = (f * (2.0 * c.v + a * c.dx) - m * b * p.dx) / (m + 1.0);
    n.dy = (f * (c.v + a * c.dy) - m * (by * p.v + b * p.dy)) / (m + 1.0);
    n.dxx = (f * (4.0 * c.dx + a * c.dxx) - m * b * p.dxx) / (m + 1.0);
    n.dxy = (f * (2.0 * c.dy + c.dx + a * c.dxy) - m * (by * p.dx + b * p.dxy)) / (m + 1.0);
    n.dyy = (f * (2.0 * c.dy + a * c.dyy) - m * (2.0 * p.v + 2.0 * by * p.dy + b * p.dyy)) /
            (m + 1.0);
    chi[m + 1] = n;
  }
}

BasisPoint combine(int m, int n, const ScalarJet& chi, Real y) {
  const Real eta = 2.0 * y - 1.0;
  const int a = 2 * m + 1;
  const Real p = jacobi_eval(a, 0, n, eta);
  const Real py = (n >= 1) ? (n + a + 1) * jacobi_eval(a + 1, 1, n - 1, eta) : 0.0;
  const Real pyy =
      (n >= 2) ? static_cast<Real>(n + a + 1) * (n + a + 2) * jacobi_eval(a + 2, 2, n - 2, eta)
               : 0.0;
  const Real scale = 0.5 * std::sqrt(static_cast<Real>(2 * m + 1) * (m + n + 1));

  BasisPoint out;
  out.value = scale * chi.v * p;
  out.grad.x() = scale * chi.dx * p;
  out.grad.y() = scale * (chi.dy * p + chi.v * py);
  out.hxx = scale * chi.dxx * p;
  out.hxy = scale * (chi.dxy * p + chi.dx * py);
  out.hyy = scale * (chi.dyy * p + 2.0 * chi.dy * py + chi.v * pyy);
  return out;
}

}  // namespace

BasisPoint dubiner_eval(int m, int n, const Vector2& point) {
  if (m < 0 || n < 0) throw std::out_of_range("dubiner_eval: negative index");
  std::vector<ScalarJet> chi;
  collapsed_legendre(m, point.x(), point.y(), chi);
  return combine(m, n, chi[m], point.y());
}

std::vector<BasisPoint> dubiner_tabulate(int k, const Vector2& point) {
  std::vector<ScalarJet> chi;
  collapsed_legendre(k, point.x(), point.y(), chi);
  std::vector<BasisPoint> out(dubiner_count(k));
  for (int d = 0; d <= k; ++d)
    for (int m = 0; m <= d; ++m)
      out[dubiner_index(m, d - m)] = combine(m, d - m, chi[m], point.y());
  return out;
}

AffineMap affine_map(const Vector2& v0, const Vector2& v1, const Vector2& v2) {
  AffineMap map;
  map.linear.col(0) = v1 - v0;
  map.linear.col(1) = v2 - v0;
  map.shift = v0;
  map.det = map.linear.determinant();
  if (map.det <= 0.0) throw std::runtime_error("affine_map: degenerate or flipped triangle");
  map.inv_t = map.linear.inverse().transpose();
  return map;
}

AffineMap affine_map(const Mesh& mesh, Index tri) {
  const Triangle& t = mesh.triangles[tri];
  return affine_map(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]], mesh.vertices[t.v[2]]);
}

DgSpace::DgSpace(const Mesh& mesh, int degree, int components)
    : mesh_(&mesh),
      degree_(degree),
      components_(components),
      nloc_(dubiner_count(degree)),
      sigma_interior(3.0 * degree * (degree + 1)),
      sigma_boundary(6.0 * degree * (degree + 1)) {
  if (degree < 1) throw std::invalid_argument("DgSpace: degree must be >= 1");
  if (components < 1) throw std::invalid_argument("DgSpace: need at least one component");

  maps_.reserve(mesh.triangles.size());
  diameters_.reserve(mesh.triangles.size());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    maps_.push_back(affine_map(mesh, t));
    diameters_.push_back(mesh.diameter(t));
  }

  const int order = 2 * degree + 2;
  volume_rule_ = triangle_rule(order);
  edge_rule_ = interval_rule(order);

  volume_basis_.reserve(volume_rule_.points.size());
  for (const Vector2& q : volume_rule_.points) volume_basis_.push_back(dubiner_tabulate(degree, q));

  static const Vector2 ref_vertex[3] = {Vector2(0, 0), Vector2(1, 0), Vector2(0, 1)};
  const int nq = static_cast<int>(edge_rule_.points.size());
  edge_basis_.resize(6 * nq);
  for (int le = 0; le < 3; ++le) {
    const Vector2& a = ref_vertex[(le + 1) % 3];
    const Vector2& b = ref_vertex[(le + 2) % 3];
    for (int o = 0; o < 2; ++o) {
      for (int q = 0; q < nq; ++q) {
        const Real t = edge_rule_.points[q];
        const Real s = (o == 0) ? t : 1.0 - t;
        edge_basis_[(le * 2 + o) * nq + q] = dubiner_tabulate(degree, a + s * (b - a));
      }
    }
  }
}

int DgSpace::edge_orientation(const Edge& e, int side) const {
  const Triangle& t = mesh_->triangles[e.tri[side]];
  return t.v[(e.local_edge[side] + 1) % 3] == e.v0 ? 0 : 1;
}

Real DgSpace::evaluate(const VectorX& coeffs, Index element, int component,
                       const Vector2& ref) const {
  const auto basis = dubiner_tabulate(degree_, ref);
  Real value = 0;
  for (int l = 0; l < nloc_; ++l) value += coeffs[dof_of(element, component, l)] * basis[l].value;
  return value;
}

Vector2 DgSpace::evaluate_gradient(const VectorX& coeffs, Index element, int component,
                                   const Vector2& ref) const {
  const auto basis = dubiner_tabulate(degree_, ref);
  Vector2 g = Vector2::Zero();
  for (int l = 0; l < nloc_; ++l) g += coeffs[dof_of(element, component, l)] * basis[l].grad;
  return maps_[element].inv_t * g;
}

VectorX DgSpace::lift_constant(Real c) const {
  VectorX u = VectorX::Zero(dof());
  // phi_00 is the constant 1/2 on the reference triangle.
  for (Index t = 0; t < mesh_->num_triangles(); ++t)
    for (int comp = 0; comp < components_; ++comp) u[dof_of(t, comp, 0)] = 2.0 * c;
  return u;
}

}  // namespace dgadapt
