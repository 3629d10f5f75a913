#ifndef DGADAPT_ASSEMBLY_HPP
#define DGADAPT_ASSEMBLY_HPP

#include "dgadapt/basis.hpp"
#include "dgadapt/block_matrix.hpp"
#include "dgadapt/problem.hpp"

namespace dgadapt {

/// Stiffness of the interior-penalty + upwind bilinear form: volume
/// diffusion/convection/linear-reaction terms, both symmetric flux terms and
/// the jump penalty on interior and Dirichlet edges, and upwind inflow terms.
BlockSparseMatrix assemble_stiffness(const DgSpace& space, const ProblemSpec& problem);

/// Load vector: source term, weakly imposed Dirichlet data (penalty and flux
/// parts), the inflow Dirichlet term, and Neumann data.
VectorX assemble_load(const DgSpace& space, const ProblemSpec& problem);

/// Nonlinear reaction vector h(U) with entries int_K r_i(u_h) phi and its
/// Jacobian blocks int_K dr_i/du_j phi_b phi_a (element-diagonal).
/// Either output may be null.
void assemble_nonlinear(const DgSpace& space, const ProblemSpec& problem, const VectorX& U,
                        VectorX* h, BlockSparseMatrix* jacobian);

/// Discrete system S U + h(U) = L.
struct AssembledSystem {
  const DgSpace* space = nullptr;
  const ProblemSpec* problem = nullptr;
  BlockSparseMatrix S;
  SparseMat S_csr;
  VectorX L;

  VectorX h(const VectorX& U) const;
  /// R(U) = S U + h(U) - L.
  VectorX residual(const VectorX& U) const;
  /// J = S + h'(U0), flattened to compressed form.
  SparseMat jacobian(const VectorX& U0) const;
};

AssembledSystem assemble_system(const DgSpace& space, const ProblemSpec& problem);

/// Energy norm of a discrete function given per-component reaction weights
/// kappa: sum_K (eps |grad v|^2 + kappa v^2) + sum_e (eps sigma / h_e) [v]^2
/// over interior and Dirichlet edges.
Real energy_norm(const DgSpace& space, const ProblemSpec& problem, const VectorX& coeffs,
                 const std::vector<Real>& kappa);

/// Energy norm of the error u - u_h against the exact solution.
Real energy_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U,
                  const std::vector<Real>& kappa);

/// L2 norm of u - u_h over all components.
Real l2_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U);

/// max |u_h - u| over all triangle corners and components.
Real max_nodal_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U);

/// Elementwise L2 projection onto the broken space, using the space's
/// quadrature rule (the basis is orthogonal, so no local solves are needed).
VectorX l2_project(const DgSpace& space, const std::function<Real(int comp, const Vector2&)>& f);

}  // namespace dgadapt

#endif
