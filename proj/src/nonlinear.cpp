#include "dgadapt/nonlinear.hpp"

#include <chrono>
#include <cmath>

namespace dgadapt {

std::pair<VectorX, NewtonReport> newton_solve(const AssembledSystem& system, LinearSolver& solver,
                                              const NewtonConfig& config,
                                              const VectorX* initial) {
  const auto start = std::chrono::steady_clock::now();
  NewtonReport report;

  VectorX U;
  bool solver_ready = false;  // prepared with a matrix equal to J(U)
  if (initial) {
    U = *initial;
  } else if (config.initial_guess == NewtonConfig::InitialGuess::Zero) {
    U = VectorX::Zero(system.space->dof());
  } else if (config.initial_guess == NewtonConfig::InitialGuess::Linearized ||
             config.initial_guess == NewtonConfig::InitialGuess::PreviousLevel) {
    // PreviousLevel without an injected state is the chain's coarsest level
    solver.prepare(system.S_csr);
    U = solver.solve(system.L);
    solver_ready = !system.problem->has_reaction();
  } else {
    U = system.space->lift_constant(config.guess_constant);
  }

  VectorX R = system.residual(U);
  const Real r0 = R.norm();
  report.residual_history.push_back(r0);
  if (r0 == 0.0) {
    report.converged = true;
    return {std::move(U), std::move(report)};
  }

  const bool frozen = config.jacobian_mode == NewtonConfig::JacobianMode::Frozen;
  bool need_rebuild = !solver_ready;
  int strikes = 0;    // consecutive iterations without residual decrease
  int refreezes = 0;  // emergency Jacobian refreshes in frozen mode

  for (int it = 1; it <= config.max_iter; ++it) {
    if (need_rebuild || (!frozen && system.problem->has_reaction()))
      solver.prepare(system.jacobian(U));
    need_rebuild = false;

    const VectorX w = solver.solve(-R);
    report.krylov_iterations.push_back(solver.last_iterations());

    // take the full step unless the residual grows; then back off, keeping
    // the best candidate seen
    Real step = 1.0;
    VectorX U_next = U + w;
    VectorX R_next = system.residual(U_next);
    Real best_norm = R_next.norm();
    if (config.damping_guard && !(best_norm <= R.norm())) {
      Real trial = 1.0;
      for (int halving = 0; halving < 8; ++halving) {
        trial *= 0.5;
        const VectorX U_trial = U + trial * w;
        const VectorX R_trial = system.residual(U_trial);
        if (R_trial.norm() < best_norm || !std::isfinite(best_norm)) {
          best_norm = R_trial.norm();
          U_next = U_trial;
          R_next = R_trial;
          step = trial;
        }
        if (R_trial.norm() <= R.norm()) break;
      }
    }

    if (!std::isfinite(best_norm)) {
      // the step is unusable; re-freeze once at the current state, else stop
      if (frozen && refreezes < 3) {
        ++refreezes;
        need_rebuild = true;
        report.iterations = it;
        report.residual_history.push_back(R.norm());
        continue;
      }
      report.iterations = it;
      report.residual_history.push_back(best_norm);
      break;
    }

    const bool improved = best_norm < R.norm();
    U = std::move(U_next);
    R = std::move(R_next);
    report.iterations = it;
    report.residual_history.push_back(R.norm());

    if (R.norm() <= config.residual_tol * r0 || step * w.norm() <= config.correction_tol) {
      report.converged = true;
      break;
    }

    // a chord frozen at an unlucky state can stall; refresh the freeze point
    if (!improved && ++strikes >= 2) {
      if (frozen && refreezes < 3) {
        ++refreezes;
        need_rebuild = true;
        strikes = 0;
      } else {
        break;  // stagnation with no refreshes left
      }
    } else if (improved) {
      strikes = 0;
    }
  }

  report.seconds = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  return {std::move(U), std::move(report)};
}

}  // namespace dgadapt
