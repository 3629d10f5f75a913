#ifndef DGADAPT_PROBLEM_HPP
#define DGADAPT_PROBLEM_HPP

#include <functional>
#include <vector>

#include "dgadapt/mesh.hpp"
#include "dgadapt/types.hpp"

namespace dgadapt {

using ScalarField = std::function<Real(const Vector2&)>;
using GradientField = std::function<Vector2(const Vector2&)>;

/// Data of one equation of the system:
///   alpha u - eps lap(u) + b . grad(u) + r(u_1..u_m) = f.
struct Component {
  Real eps = 1.0;                // diffusion, > 0
  Real alpha = 0.0;              // linear reaction, >= 0
  VelocityField velocity;        // b(x); null means zero field
  ScalarField div_velocity;      // analytic divergence of b; null means zero
  ScalarField source;            // f(x); null means zero

  // Exact solution hooks for error tables (optional).
  ScalarField exact;
  GradientField exact_grad;
  ScalarField exact_laplacian;
  bool has_exact() const { return static_cast<bool>(exact); }

  Vector2 b(const Vector2& x) const { return velocity ? velocity(x) : Vector2::Zero(); }
  Real div_b(const Vector2& x) const { return div_velocity ? div_velocity(x) : 0.0; }
  Real f(const Vector2& x) const { return source ? source(x) : 0.0; }
};

/// m-component reactive transport problem. The components couple only
/// through the nonlinear reaction r_i(u) and its analytic partials.
struct ProblemSpec {
  std::vector<Component> components;

  // r_i(u) and dr_i/du_j; null means r = 0.
  std::function<Real(int i, const VectorX& u)> reaction;
  std::function<Real(int i, int j, const VectorX& u)> reaction_jacobian;

  // Boundary data, evaluated on edges of the matching kind.
  std::function<Real(int comp, int segment, const Vector2& x)> dirichlet;
  std::function<Real(int comp, int segment, const Vector2& x)> neumann;

  int m() const { return static_cast<int>(components.size()); }
  bool has_reaction() const { return static_cast<bool>(reaction); }

  Real r(int i, const VectorX& u) const { return reaction ? reaction(i, u) : 0.0; }
  Real dr(int i, int j, const VectorX& u) const {
    return reaction_jacobian ? reaction_jacobian(i, j, u) : 0.0;
  }
  Real g_dirichlet(int comp, int segment, const Vector2& x) const {
    return dirichlet ? dirichlet(comp, segment, x) : 0.0;
  }
  Real g_neumann(int comp, int segment, const Vector2& x) const {
    return neumann ? neumann(comp, segment, x) : 0.0;
  }

  bool has_exact() const {
    for (const Component& c : components)
      if (!c.has_exact()) return false;
    return !components.empty();
  }

  /// Single-component problem with no nonlinear reaction.
  static ProblemSpec scalar(Component c) {
    ProblemSpec p;
    p.components.push_back(std::move(c));
    return p;
  }
};

}  // namespace dgadapt

#endif
