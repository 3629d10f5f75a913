#ifndef DGADAPT_LINSOLVE_HPP
#define DGADAPT_LINSOLVE_HPP

#include <Eigen/SparseLU>

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dgadapt/types.hpp"

namespace dgadapt {

using ColMajorSparse = Eigen::SparseMatrix<Real, Eigen::ColMajor, Index>;

/// Bijective index map; order[k] is the old index placed at new position k.
struct Permutation {
  std::vector<Index> order;
  std::vector<Index> inverse;

  Index size() const { return static_cast<Index>(order.size()); }
  static Permutation identity(Index n);
  static Permutation from_order(std::vector<Index> order);

  VectorX apply(const VectorX& x) const;          // y[k] = x[order[k]]
  VectorX apply_inverse(const VectorX& y) const;  // x[order[k]] = y[k]
  SparseMat apply(const SparseMat& J) const;      // N = P J P^T
};

/// Left Jacobi scaling: divides row i by J_ii. The solution is unchanged;
/// right-hand sides must be scaled by the recorded diagonal.
struct JacobiScaling {
  VectorX diagonal;
  VectorX scale_rhs(const VectorX& rhs) const { return rhs.cwiseQuotient(diagonal); }
};
std::pair<SparseMat, JacobiScaling> jacobi_scale(const SparseMat& J);

/// Unweighted graph Laplacian of the symmetrized sparsity pattern
/// (diagonal excluded from the adjacency).
SparseMat pattern_laplacian(const SparseMat& J);

struct ReorderResult {
  Permutation perm;
  VectorX sorted_values;  // eigenvector components in permuted order (descending)
  Real eigenvalue = 0;
  int iterations = 0;
};

/// Reordering by the eigenvector of the largest Laplacian eigenvalue,
/// computed by power iteration from a deterministic start vector.
/// Throws on non-convergence.
ReorderResult laplacian_reorder(const SparseMat& J, Real tol = 1e-8, int max_iter = 5000);

/// Split position for a 2x2 block partition: largest consecutive gap of the
/// sorted eigenvector components, constrained to [0.2 n, 0.8 n]; falls back
/// to ceil(n/2) when the window is empty or degenerate.
Index split_index(const VectorX& sorted_values);

struct BlockPartition {
  Index s = 0;
  SparseMat A, B, Ct, D;
};

/// Leading s x s block and its complements; reassembling [[A,B],[Ct,D]]
/// reproduces N entrywise.
BlockPartition block_partition_at(const SparseMat& N, Index s);
BlockPartition block_partition(const SparseMat& N, const VectorX& sorted_values);

// --- Krylov ---

using MatVec = std::function<VectorX(const VectorX&)>;

struct KrylovResult {
  VectorX x;
  Real iterations = 0;  // half-steps count 0.5
  bool converged = false;
  bool breakdown = false;
  const char* breakdown_reason = "";
  Real relative_residual = 0;
};

/// Right-preconditioned BiCGStab with stopping rule ||r_i|| <= tol ||r_0||.
/// `prec` may be null (no preconditioning).
KrylovResult bicgstab(const MatVec& op, const MatVec& prec, const VectorX& d, Real tol,
                      int max_iter, const VectorX* x0 = nullptr);

/// Zero-fill incomplete LU on the sparsity pattern of S. A zero pivot is an
/// error unless a diagonal shift is supplied.
class Ilu0 {
 public:
  explicit Ilu0(const SparseMat& S, Real diag_shift = 0.0);
  VectorX solve(const VectorX& r) const;
  const SparseMat& factors() const { return lu_; }  // L (unit diag) and U share the pattern

 private:
  SparseMat lu_;
};

/// Prepared data of the 2x2 block elimination: direct factorization of A,
/// the explicit U = A^{-1} B, the explicit Schur complement S = D - Ct U,
/// and optionally ILU(S).
struct BlockFactorization {
  Index s = 0;
  SparseMat A, B, Ct, D;
  std::shared_ptr<Eigen::SparseLU<ColMajorSparse>> A_lu;
  SparseMat U;
  SparseMat S;
  std::shared_ptr<Ilu0> ilu;

  Index n() const { return A.rows() + D.rows(); }
};

BlockFactorization prepare_factorization(const BlockPartition& partition, bool build_ilu);

struct BlockSolveResult {
  VectorX w;
  Real schur_iterations = 0;
};

/// solve A t = d1 directly; solve S w2 = d2 - Ct t by BiCGStab (with ILU(S)
/// when prepared); w1 = t - U w2. Throws on Krylov failure.
BlockSolveResult block_lu_solve(const BlockFactorization& fact, const VectorX& d, Real tol,
                                int max_iter, bool use_ilu);

/// Inner treatment of S^{-1} inside the M1/M2 preconditioners.
enum class SchurInnerMode {
  IluApply,   // one application of ILU(S)
  InnerSteps  // a fixed small budget of ILU-preconditioned BiCGStab steps
};

/// M1 = [[A,0],[Ct,S]] (block forward) and M2 = [[A,B],[0,S]] (block
/// backward) applied via the direct A factorization.
MatVec make_m1_preconditioner(const BlockFactorization& fact, SchurInnerMode mode,
                              int inner_steps = 5);
MatVec make_m2_preconditioner(const BlockFactorization& fact, SchurInnerMode mode,
                              int inner_steps = 5);

/// Estimated 2-norm condition number: dense SVD at moderate size, otherwise
/// power/inverse-power iteration on the normal equations.
Real condition_report(const SparseMat& M, Index dense_limit = 2000);

// --- Matrix Market coordinate format ---
void mm_write(std::ostream& out, const SparseMat& M);
void mm_write_file(const std::string& path, const SparseMat& M);
SparseMat mm_read(std::istream& in);
SparseMat mm_read_file(const std::string& path);

// --- The solver stack used by the Newton loop ---

enum class SolverMethod { Unpermuted, M1, M2, BlockLU, BlockLUIlu, Direct };

SolverMethod solver_method_from_name(const std::string& name);
std::string solver_method_name(SolverMethod method);

struct LinearSolverConfig {
  SolverMethod method = SolverMethod::BlockLUIlu;
  Real krylov_tol = 1e-7;  // relative residual
  int krylov_max_iter = 20000;
  SchurInnerMode inner_mode = SchurInnerMode::InnerSteps;
  int inner_steps = 5;
};

/// One prepared linear solver per Jacobian: scaling, permutation and
/// factorizations are computed once in prepare() and reused across
/// right-hand sides (the frozen-Jacobian setting).
class LinearSolver {
 public:
  explicit LinearSolver(LinearSolverConfig config = {}) : config_(config) {}

  void prepare(const SparseMat& J);
  bool prepared() const { return prepared_; }

  /// Solves J w = rhs. Throws on breakdown or non-convergence.
  VectorX solve(const VectorX& rhs);

  Real last_iterations() const { return last_iterations_; }
  Real total_iterations() const { return total_iterations_; }
  int solve_count() const { return solve_count_; }

  // wall-clock seconds per phase
  Real seconds_reorder = 0;
  Real seconds_factor = 0;
  Real seconds_solve = 0;

  const LinearSolverConfig& config() const { return config_; }
  const BlockFactorization* factorization() const {
    return has_partition_ ? &fact_ : nullptr;
  }
  const Permutation* permutation() const { return has_partition_ ? &perm_ : nullptr; }

 private:
  LinearSolverConfig config_;
  bool prepared_ = false;
  bool has_partition_ = false;
  JacobiScaling scaling_;
  SparseMat scaled_;  // scaled (unpermuted) matrix
  Permutation perm_;
  BlockFactorization fact_;
  std::shared_ptr<Eigen::SparseLU<ColMajorSparse>> direct_;
  Real last_iterations_ = 0;
  Real total_iterations_ = 0;
  int solve_count_ = 0;
};

}  // namespace dgadapt

#endif
