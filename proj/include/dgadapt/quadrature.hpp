#ifndef DGADAPT_QUADRATURE_HPP
#define DGADAPT_QUADRATURE_HPP

#include <vector>

#include "dgadapt/types.hpp"

namespace dgadapt {

/// Quadrature nodes and weights on the reference triangle
/// T_ref = { 0 <= x1, x2, x1 + x2 <= 1 }.
struct TriangleRule {
  std::vector<Vector2> points;
  std::vector<Real> weights;  // sum to area(T_ref) = 1/2
  int order = 0;              // exact for total degree <= order
};

/// Gauss rule on [0,1].
struct IntervalRule {
  std::vector<Real> points;
  std::vector<Real> weights;  // sum to 1
  int order = 0;
};

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^a (1+x)^b,
/// exact for integrands of degree <= 2n-1.
void gauss_jacobi(int n, int a, int b, std::vector<Real>& points, std::vector<Real>& weights);

/// Rule exact for all polynomials of total degree <= order. Built as a
/// collapsed Gauss x Gauss-Jacobi product, so weights are positive for any order.
TriangleRule triangle_rule(int order);

IntervalRule interval_rule(int order);

}  // namespace dgadapt

#endif
