#include "dgadapt/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace dgadapt {

namespace {

Real log_gamma(Real x) { return std::lgamma(x); }

}  // namespace

void gauss_jacobi(int n, int a, int b, std::vector<Real>& points, std::vector<Real>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: need at least one node");

  // Golub-Welsch on the symmetric Jacobi matrix of the three-term recurrence.
  const Real ab = static_cast<Real>(a + b);
  MatrixX T = MatrixX::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    Real alpha;
    if (k == 0) {
      alpha = (b - a) / (ab + 2.0);
    } else {
      const Real d = 2.0 * k + ab;
      alpha = (static_cast<Real>(b) * b - static_cast<Real>(a) * a) / (d * (d + 2.0));
    }
    T(k, k) = alpha;
  }
  for (int k = 1; k < n; ++k) {
    const Real d = 2.0 * k + ab;
    const Real beta2 =
        4.0 * k * (k + a) * (k + b) * (k + ab) / (d * d * (d + 1.0) * (d - 1.0));
    T(k, k - 1) = T(k - 1, k) = std::sqrt(beta2);
  }

  Eigen::SelfAdjointEigenSolver<MatrixX> es(T);
  const Real mu0 = std::exp((ab + 1.0) * std::log(2.0) + log_gamma(a + 1.0) +
                            log_gamma(b + 1.0) - log_gamma(ab + 2.0));

  points.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    points[k] = es.eigenvalues()(k);
    const Real v0 = es.eigenvectors()(0, k);
    weights[k] = mu0 * v0 * v0;
  }
}

IntervalRule interval_rule(int order) {
  if (order < 1) throw std::invalid_argument("interval_rule: order must be >= 1");
  const int n = (order + 2) / 2;
  std::vector<Real> x, w;
  gauss_jacobi(n, 0, 0, x, w);
  IntervalRule rule;
  rule.order = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.points[k] = 0.5 * (x[k] + 1.0);
    rule.weights[k] = 0.5 * w[k];
  }
  return rule;
}

TriangleRule triangle_rule(int order) {
  if (order < 1) throw std::invalid_argument("triangle_rule: order must be >= 1");
  const int n = (order + 2) / 2;

  // Duffy split: x1 = u (1 - v), x2 = v with the (1 - v) factor absorbed
  // into a Gauss-Jacobi(1,0) rule in v.
  std::vector<Real> xu, wu, xv, wv;
  gauss_jacobi(n, 0, 0, xu, wu);
  gauss_jacobi(n, 1, 0, xv, wv);

  TriangleRule rule;
  rule.order = 2 * n - 1;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const Real u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const Real v = 0.5 * (xv[j] + 1.0);
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(0.5 * wu[i] * 0.25 * wv[j]);
    }
  }
  return rule;
}

}  // namespace dgadapt
