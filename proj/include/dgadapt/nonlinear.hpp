#ifndef DGADAPT_NONLINEAR_HPP
#define DGADAPT_NONLINEAR_HPP

#include <utility>
#include <vector>

#include "dgadapt/assembly.hpp"
#include "dgadapt/linsolve.hpp"

namespace dgadapt {

/// Newton-Raphson settings. In Frozen mode the Jacobian (and everything the
/// linear solver prepares from it) is built once at the initial iterate and
/// reused; Full mode rebuilds both every step.
struct NewtonConfig {
  enum class JacobianMode { Frozen, Full };
  // Linearized solves the r = 0 system once and starts the iteration there;
  // chord iterations from a constant state stall on coarse unresolved-layer
  // meshes, the linearized state is close enough for the frozen Jacobian to
  // contract.
  enum class InitialGuess { Zero, Constant, PreviousLevel, Linearized };

  int max_iter = 50;
  Real residual_tol = 1e-8;    // relative to the initial residual norm
  Real correction_tol = 1e-10;
  JacobianMode jacobian_mode = JacobianMode::Frozen;
  // warm-start chain: previous-level solutions injected by L2 projection,
  // the coarsest level starting from the linearized problem
  InitialGuess initial_guess = InitialGuess::PreviousLevel;
  Real guess_constant = 1.0;
  // step halving only when the residual norm would increase
  bool damping_guard = true;
};

struct NewtonReport {
  int iterations = 0;
  bool converged = false;
  std::vector<Real> residual_history;    // length iterations + 1
  std::vector<Real> krylov_iterations;   // per Newton step
  Real seconds = 0;

  Real average_krylov() const {
    if (krylov_iterations.empty()) return 0;
    Real sum = 0;
    for (Real k : krylov_iterations) sum += k;
    return sum / krylov_iterations.size();
  }
};

/// Solves S U + h(U) = L by (frozen-Jacobian) Newton: J w = -R(U),
/// U <- U + w. `initial` overrides the configured guess (used to warm-start
/// from the previous refinement level).
std::pair<VectorX, NewtonReport> newton_solve(const AssembledSystem& system, LinearSolver& solver,
                                              const NewtonConfig& config,
                                              const VectorX* initial = nullptr);

}  // namespace dgadapt

#endif
