#include "dgadapt/linsolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dgadapt {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  Real seconds() const {
    return std::chrono::duration<Real>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Permutation Permutation::identity(Index n) {
  Permutation p;
  p.order.resize(n);
  p.inverse.resize(n);
  std::iota(p.order.begin(), p.order.end(), 0);
  std::iota(p.inverse.begin(), p.inverse.end(), 0);
  return p;
}

Permutation Permutation::from_order(std::vector<Index> order) {
  Permutation p;
  p.inverse.assign(order.size(), -1);
  for (Index k = 0; k < static_cast<Index>(order.size()); ++k) {
    if (order[k] < 0 || order[k] >= static_cast<Index>(order.size()) || p.inverse[order[k]] >= 0)
      throw std::invalid_argument("Permutation: not a bijection");
    p.inverse[order[k]] = k;
  }
  p.order = std::move(order);
  return p;
}

VectorX Permutation::apply(const VectorX& x) const {
  VectorX y(x.size());
  for (Index k = 0; k < size(); ++k) y[k] = x[order[k]];
  return y;
}

VectorX Permutation::apply_inverse(const VectorX& y) const {
  VectorX x(y.size());
  for (Index k = 0; k < size(); ++k) x[order[k]] = y[k];
  return x;
}

SparseMat Permutation::apply(const SparseMat& J) const {
  std::vector<Triplet> triplets;
  triplets.reserve(J.nonZeros());
  for (Index i = 0; i < J.outerSize(); ++i)
    for (SparseMat::InnerIterator it(J, i); it; ++it)
      triplets.emplace_back(inverse[it.row()], inverse[it.col()], it.value());
  SparseMat N(J.rows(), J.cols());
  N.setFromTriplets(triplets.begin(), triplets.end());
  N.makeCompressed();
  return N;
}

std::pair<SparseMat, JacobiScaling> jacobi_scale(const SparseMat& J) {
  const Index n = J.rows();
  JacobiScaling scaling;
  scaling.diagonal.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Real d = J.coeff(i, i);
    if (d == 0.0) throw std::runtime_error("jacobi scaling impossible: zero diagonal entry");
    scaling.diagonal[i] = d;
  }
  SparseMat scaled = J;
  for (Index i = 0; i < scaled.outerSize(); ++i)
    for (SparseMat::InnerIterator it(scaled, i); it; ++it)
      it.valueRef() /= scaling.diagonal[it.row()];
  return {std::move(scaled), std::move(scaling)};
}

SparseMat pattern_laplacian(const SparseMat& J) {
  const Index n = J.rows();
  std::vector<std::vector<Index>> adjacency(n);
  for (Index i = 0; i < J.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(J, i); it; ++it) {
      if (it.row() == it.col()) continue;
      adjacency[it.row()].push_back(it.col());
      adjacency[it.col()].push_back(it.row());
    }
  }
  std::vector<Triplet> triplets;
  for (Index i = 0; i < n; ++i) {
    auto& nb = adjacency[i];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (Index j : nb) triplets.emplace_back(i, j, -1.0);
    triplets.emplace_back(i, i, static_cast<Real>(nb.size()));
  }
  SparseMat L(n, n);
  L.setFromTriplets(triplets.begin(), triplets.end());
  L.makeCompressed();
  return L;
}

ReorderResult laplacian_reorder(const SparseMat& J, Real tol, int max_iter) {
  if (J.rows() != J.cols()) throw std::invalid_argument("laplacian_reorder: square matrix needed");
  const Index n = J.rows();
  const SparseMat L = pattern_laplacian(J);

  // All-ones start plus deterministic perturbations. The sine term is not a
  // polynomial in the index, so the start cannot be exactly orthogonal to the
  // top eigenvector of structured graphs (an index-linear perturbation alone
  // is orthogonal to it on path graphs, trapping the iteration below lambda_max).
  VectorX v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = 1.0 + static_cast<Real>(i) / n + 0.5 * std::sin(1.0 + i);
  v.normalize();

  Real lambda = 0;
  Real residual = 0;
  int it = 0;
  int stagnant = 0;
  for (; it < max_iter; ++it) {
    VectorX w = L * v;
    const Real lambda_prev = lambda;
    lambda = v.dot(w);
    residual = (w - lambda * v).norm();
    const Real scale = std::max<Real>(lambda, 1.0);
    if (residual <= tol * scale) break;
    // Degenerate top cluster: the vector keeps rotating inside the eigenspace
    // and the residual plateaus at the cluster width. Any vector of the
    // cluster orders the unknowns equally well, so accept a plateaued
    // iteration once the residual is small in absolute terms.
    if (std::abs(lambda - lambda_prev) <= 1e-13 * scale) {
      if (++stagnant >= 30) break;
    } else {
      stagnant = 0;
    }
    if (2 * it >= max_iter && residual <= 1e-4 * scale) break;
    const Real norm = w.norm();
    if (norm == 0.0) break;  // v spans the kernel; any order works
    v = w / norm;
  }
  if (it == max_iter) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "laplacian_reorder: power iteration stalled, residual %.3e after %d iterations",
                  residual, max_iter);
    throw std::runtime_error(buf);
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v[a] > v[b]; });

  ReorderResult result;
  result.perm = Permutation::from_order(std::move(order));
  result.sorted_values.resize(n);
  for (Index k = 0; k < n; ++k) result.sorted_values[k] = v[result.perm.order[k]];
  result.eigenvalue = lambda;
  result.iterations = it + 1;
  return result;
}

Index split_index(const VectorX& sorted_values) {
  const Index n = static_cast<Index>(sorted_values.size());
  const Index fallback = (n + 1) / 2;
  if (n < 2) return fallback;
  Index lo = static_cast<Index>(std::ceil(0.2 * n));
  Index hi = static_cast<Index>(std::floor(0.8 * n));
  lo = std::max<Index>(lo, 1);
  hi = std::min<Index>(hi, n - 1);
  if (lo > hi) return fallback;
  Index best = lo;
  Real best_gap = -1;
  for (Index s = lo; s <= hi; ++s) {
    const Real gap = sorted_values[s - 1] - sorted_values[s];
    if (gap > best_gap) {
      best_gap = gap;
      best = s;
    }
  }
  return best;
}

BlockPartition block_partition_at(const SparseMat& N, Index s) {
  const Index n = N.rows();
  if (s <= 0 || s >= n) throw std::invalid_argument("block_partition: split outside (0, n)");
  BlockPartition p;
  p.s = s;
  std::vector<Triplet> a, b, ct, d;
  for (Index i = 0; i < N.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(N, i); it; ++it) {
      const Index r = it.row(), c = it.col();
      if (r < s && c < s)
        a.emplace_back(r, c, it.value());
      else if (r < s)
        b.emplace_back(r, c - s, it.value());
      else if (c < s)
        ct.emplace_back(r - s, c, it.value());
      else
        d.emplace_back(r - s, c - s, it.value());
    }
  }
  p.A.resize(s, s);
  p.B.resize(s, n - s);
  p.Ct.resize(n - s, s);
  p.D.resize(n - s, n - s);
  p.A.setFromTriplets(a.begin(), a.end());
  p.B.setFromTriplets(b.begin(), b.end());
  p.Ct.setFromTriplets(ct.begin(), ct.end());
  p.D.setFromTriplets(d.begin(), d.end());
  p.A.makeCompressed();
  p.B.makeCompressed();
  p.Ct.makeCompressed();
  p.D.makeCompressed();
  return p;
}

BlockPartition block_partition(const SparseMat& N, const VectorX& sorted_values) {
  return block_partition_at(N, split_index(sorted_values));
}

KrylovResult bicgstab(const MatVec& op, const MatVec& prec, const VectorX& d, Real tol,
                      int max_iter, const VectorX* x0) {
  KrylovResult result;
  const Index n = d.size();
  VectorX x = x0 ? *x0 : VectorX::Zero(n);
  VectorX r = x0 ? VectorX(d - op(x)) : d;
  const Real r0_norm = r.norm();
  result.x = x;
  if (r0_norm == 0.0) {
    result.converged = true;
    return result;
  }
  const Real threshold = tol * r0_norm;

  const VectorX rt = r;
  Real rho = 1, alpha = 1, omega = 1;
  VectorX v = VectorX::Zero(n), p = VectorX::Zero(n);

  Real best = r0_norm;
  int since_best = 0;
  auto apply_prec = [&](const VectorX& y) { return prec ? prec(y) : y; };

  for (int k = 0; k < max_iter; ++k) {
    const Real rho_new = rt.dot(r);
    if (!std::isfinite(rho_new) || std::abs(rho_new) < 1e-300) {
      result.breakdown = true;
      result.breakdown_reason = "rho ~ 0";
      break;
    }
    if (k == 0) {
      p = r;
    } else {
      const Real beta = (rho_new / rho) * (alpha / omega);
      p = r + beta * (p - omega * v);
    }
    rho = rho_new;

    const VectorX phat = apply_prec(p);
    v = op(phat);
    const Real rtv = rt.dot(v);
    if (!std::isfinite(rtv) || rtv == 0.0) {
      result.breakdown = true;
      result.breakdown_reason = "rt.v = 0";
      break;
    }
    alpha = rho / rtv;
    const VectorX s = r - alpha * v;
    x += alpha * phat;
    result.iterations += 0.5;
    Real res = s.norm();
    if (res <= threshold) {
      result.converged = true;
      r = s;
      break;
    }

    const VectorX shat = apply_prec(s);
    const VectorX t = op(shat);
    const Real tt = t.dot(t);
    if (!std::isfinite(tt) || tt == 0.0) {
      result.breakdown = true;
      result.breakdown_reason = "t.t = 0";
      break;
    }
    omega = t.dot(s) / tt;
    x += omega * shat;
    r = s - omega * t;
    result.iterations += 0.5;
    res = r.norm();
    if (res <= threshold) {
      result.converged = true;
      break;
    }
    if (!std::isfinite(res) || omega == 0.0) {
      result.breakdown = true;
      result.breakdown_reason = std::isfinite(res) ? "omega = 0" : "residual not finite";
      break;
    }
    if (res < best) {
      best = res;
      since_best = 0;
    } else if (++since_best >= 50) {
      break;  // stagnation
    }
  }
  result.x = x;
  result.relative_residual = r.norm() / r0_norm;
  return result;
}

Ilu0::Ilu0(const SparseMat& S, Real diag_shift) : lu_(S) {
  lu_.makeCompressed();
  const Index n = lu_.rows();
  const Index* outer = lu_.outerIndexPtr();
  const Index* inner = lu_.innerIndexPtr();
  Real* values = lu_.valuePtr();

  std::vector<Index> diag_pos(n, -1);
  for (Index i = 0; i < n; ++i)
    for (Index p = outer[i]; p < outer[i + 1]; ++p)
      if (inner[p] == i) diag_pos[i] = p;
  for (Index i = 0; i < n; ++i)
    if (diag_pos[i] < 0) throw std::runtime_error("ILU(0) breakdown: missing diagonal entry");

  for (Index i = 1; i < n; ++i) {
    for (Index pk = outer[i]; pk < outer[i + 1] && inner[pk] < i; ++pk) {
      const Index k = inner[pk];
      Real pivot = values[diag_pos[k]];
      if (pivot == 0.0) {
        if (diag_shift == 0.0) throw std::runtime_error("ILU(0) breakdown: zero pivot");
        pivot = diag_shift;
      }
      const Real factor = values[pk] / pivot;
      values[pk] = factor;
      // subtract factor * row_k from row_i on the shared pattern right of k
      Index pi = pk + 1;
      Index pj = diag_pos[k] + 1;
      while (pi < outer[i + 1] && pj < outer[k + 1]) {
        if (inner[pi] == inner[pj]) {
          values[pi] -= factor * values[pj];
          ++pi;
          ++pj;
        } else if (inner[pi] < inner[pj]) {
          ++pi;
        } else {
          ++pj;
        }
      }
    }
    if (values[diag_pos[i]] == 0.0) {
      if (diag_shift == 0.0) throw std::runtime_error("ILU(0) breakdown: zero pivot");
      values[diag_pos[i]] = diag_shift;
    }
  }
}

VectorX Ilu0::solve(const VectorX& r) const {
  const Index n = lu_.rows();
  const Index* outer = lu_.outerIndexPtr();
  const Index* inner = lu_.innerIndexPtr();
  const Real* values = lu_.valuePtr();

  VectorX y = r;
  for (Index i = 0; i < n; ++i) {
    Real acc = r[i];
    for (Index p = outer[i]; p < outer[i + 1] && inner[p] < i; ++p) acc -= values[p] * y[inner[p]];
    y[i] = acc;
  }
  VectorX x(n);
  for (Index i = n - 1; i >= 0; --i) {
    Real acc = y[i];
    Real diag = 1;
    for (Index p = outer[i + 1] - 1; p >= outer[i] && inner[p] >= i; --p) {
      if (inner[p] == i)
        diag = values[p];
      else
        acc -= values[p] * x[inner[p]];
    }
    x[i] = acc / diag;
  }
  return x;
}

BlockFactorization prepare_factorization(const BlockPartition& partition, bool build_ilu) {
  BlockFactorization fact;
  fact.s = partition.s;
  fact.A = partition.A;
  fact.B = partition.B;
  fact.Ct = partition.Ct;
  fact.D = partition.D;

  fact.A_lu = std::make_shared<Eigen::SparseLU<ColMajorSparse>>();
  const ColMajorSparse A_col(partition.A);
  fact.A_lu->compute(A_col);
  if (fact.A_lu->info() != Eigen::Success)
    throw std::runtime_error("block factorization: sparse LU of A failed");

  const Index s = partition.s;
  const Index q = partition.D.rows();
  const ColMajorSparse B_col(partition.B);

  std::vector<Triplet> u_triplets, s_triplets;
  // start from D and subtract Ct A^{-1} B column by column (columns of B
  // without entries contribute nothing)
  for (Index i = 0; i < partition.D.outerSize(); ++i)
    for (SparseMat::InnerIterator it(partition.D, i); it; ++it)
      s_triplets.emplace_back(it.row(), it.col(), it.value());
  for (Index j = 0; j < q; ++j) s_triplets.emplace_back(j, j, 0.0);  // keep the diagonal stored

  for (Index j = 0; j < q; ++j) {
    if (B_col.outerIndexPtr()[j] == B_col.outerIndexPtr()[j + 1]) continue;
    const VectorX y = fact.A_lu->solve(VectorX(B_col.col(j)));
    for (Index i = 0; i < s; ++i)
      if (y[i] != 0.0) u_triplets.emplace_back(i, j, y[i]);
    const VectorX z = partition.Ct * y;
    for (Index i = 0; i < q; ++i)
      if (z[i] != 0.0) s_triplets.emplace_back(i, j, -z[i]);
  }

  fact.U.resize(s, q);
  fact.U.setFromTriplets(u_triplets.begin(), u_triplets.end());
  fact.U.makeCompressed();
  fact.S.resize(q, q);
  fact.S.setFromTriplets(s_triplets.begin(), s_triplets.end());
  fact.S.makeCompressed();

  if (build_ilu) fact.ilu = std::make_shared<Ilu0>(fact.S);
  return fact;
}

BlockSolveResult block_lu_solve(const BlockFactorization& fact, const VectorX& d, Real tol,
                                int max_iter, bool use_ilu) {
  const Index s = fact.s;
  const Index q = fact.D.rows();
  if (d.size() != s + q) throw std::invalid_argument("block_lu_solve: dimension mismatch");

  const VectorX t = fact.A_lu->solve(VectorX(d.head(s)));
  const VectorX rhs2 = d.tail(q) - fact.Ct * t;

  MatVec op = [&fact](const VectorX& w) { return VectorX(fact.S * w); };
  MatVec prec;
  if (use_ilu) {
    if (!fact.ilu) throw std::logic_error("block_lu_solve: ILU(S) not prepared");
    prec = [&fact](const VectorX& w) { return fact.ilu->solve(w); };
    // initial check: when ILU(S) happens to solve the system outright
    // (triangular or no-fill patterns), skip the iteration entirely
    const VectorX guess = fact.ilu->solve(rhs2);
    if ((rhs2 - fact.S * guess).norm() <= tol * rhs2.norm()) {
      BlockSolveResult result;
      result.w.resize(s + q);
      result.w.head(s) = t - fact.U * guess;
      result.w.tail(q) = guess;
      return result;
    }
  }
  const KrylovResult schur = bicgstab(op, prec, rhs2, tol, max_iter);
  if (schur.breakdown) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "block_lu_solve: BiCGStab breakdown (%s) at iteration %.1f, residual %.3e",
                  schur.breakdown_reason, schur.iterations, schur.relative_residual);
    throw std::runtime_error(buf);
  }
  if (!schur.converged && rhs2.norm() > 0) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "block_lu_solve: Schur BiCGStab did not converge (relative residual %.3e)",
                  schur.relative_residual);
    throw std::runtime_error(buf);
  }

  BlockSolveResult result;
  result.schur_iterations = schur.iterations;
  result.w.resize(s + q);
  result.w.head(s) = t - fact.U * schur.x;
  result.w.tail(q) = schur.x;
  return result;
}

namespace {

VectorX schur_inner_apply(const BlockFactorization& fact, SchurInnerMode mode, int inner_steps,
                          const VectorX& rhs) {
  if (!fact.ilu) throw std::logic_error("M1/M2 preconditioner: ILU(S) not prepared");
  if (mode == SchurInnerMode::IluApply) return fact.ilu->solve(rhs);
  MatVec op = [&fact](const VectorX& w) { return VectorX(fact.S * w); };
  MatVec prec = [&fact](const VectorX& w) { return fact.ilu->solve(w); };
  return bicgstab(op, prec, rhs, 1e-14, inner_steps).x;
}

}  // namespace

MatVec make_m1_preconditioner(const BlockFactorization& fact, SchurInnerMode mode,
                              int inner_steps) {
  return [&fact, mode, inner_steps](const VectorX& r) {
    const Index s = fact.s;
    const VectorX z1 = fact.A_lu->solve(VectorX(r.head(s)));
    const VectorX z2 =
        schur_inner_apply(fact, mode, inner_steps, VectorX(r.tail(r.size() - s) - fact.Ct * z1));
    VectorX z(r.size());
    z.head(s) = z1;
    z.tail(r.size() - s) = z2;
    return z;
  };
}

MatVec make_m2_preconditioner(const BlockFactorization& fact, SchurInnerMode mode,
                              int inner_steps) {
  return [&fact, mode, inner_steps](const VectorX& r) {
    const Index s = fact.s;
    const VectorX z2 = schur_inner_apply(fact, mode, inner_steps, VectorX(r.tail(r.size() - s)));
    const VectorX z1 = fact.A_lu->solve(VectorX(r.head(s) - fact.B * z2));
    VectorX z(r.size());
    z.head(s) = z1;
    z.tail(r.size() - s) = z2;
    return z;
  };
}

Real condition_report(const SparseMat& M, Index dense_limit) {
  if (M.rows() != M.cols()) throw std::invalid_argument("condition_report: square matrix needed");
  const Index n = M.rows();
  if (n <= dense_limit) {
    Eigen::BDCSVD<MatrixX> svd(MatrixX{M});
    const Real smin = svd.singularValues()(n - 1);
    if (smin == 0.0) throw std::runtime_error("condition_report: matrix singular to working precision");
    return svd.singularValues()(0) / smin;
  }

  // power iteration on M^T M for sigma_max, inverse iteration for sigma_min
  Eigen::SparseLU<ColMajorSparse> lu;
  lu.compute(ColMajorSparse(M));
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("condition_report: matrix singular to working precision");
  const SparseMat Mt = SparseMat(M.transpose());
  Eigen::SparseLU<ColMajorSparse> lu_t;
  lu_t.compute(ColMajorSparse(Mt));
  if (lu_t.info() != Eigen::Success)
    throw std::runtime_error("condition_report: matrix singular to working precision");

  VectorX v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + static_cast<Real>(i) / n;
  v.normalize();
  Real hi = 0;
  for (int it = 0; it < 300; ++it) {
    VectorX w = Mt * VectorX(M * v);
    const Real lambda = v.dot(w);
    if (it > 20 && std::abs(lambda - hi) <= 1e-6 * lambda) {
      hi = lambda;
      break;
    }
    hi = lambda;
    v = w.normalized();
  }
  VectorX u(n);
  for (Index i = 0; i < n; ++i) u[i] = 1.0 + static_cast<Real>(n - i) / n;
  u.normalize();
  Real lo_inv = 0;
  for (int it = 0; it < 300; ++it) {
    VectorX w = lu.solve(VectorX(lu_t.solve(u)));
    const Real lambda = u.dot(w);
    if (it > 20 && std::abs(lambda - lo_inv) <= 1e-6 * std::abs(lambda)) {
      lo_inv = lambda;
      break;
    }
    lo_inv = lambda;
    u = w.normalized();
  }
  return std::sqrt(hi * std::abs(lo_inv));
}

void mm_write(std::ostream& out, const SparseMat& M) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
  char line[96];
  for (Index i = 0; i < M.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(M, i); it; ++it) {
      std::snprintf(line, sizeof line, "%d %d %.17g\n", it.row() + 1, it.col() + 1, it.value());
      out << line;
    }
  }
}

void mm_write_file(const std::string& path, const SparseMat& M) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  mm_write(out, M);
}

SparseMat mm_read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("matrix market: bad header");
  if (line.find("coordinate") == std::string::npos || line.find("general") == std::string::npos)
    throw std::runtime_error("matrix market: only coordinate/general supported");
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream dims(line);
  Index rows = 0, cols = 0;
  long long nnz = 0;
  if (!(dims >> rows >> cols >> nnz)) throw std::runtime_error("matrix market: bad size line");
  std::vector<Triplet> triplets;
  triplets.reserve(nnz);
  for (long long k = 0; k < nnz; ++k) {
    Index i, j;
    Real v;
    if (!(in >> i >> j >> v)) throw std::runtime_error("matrix market: truncated entries");
    triplets.emplace_back(i - 1, j - 1, v);
  }
  SparseMat M(rows, cols);
  M.setFromTriplets(triplets.begin(), triplets.end());
  M.makeCompressed();
  return M;
}

SparseMat mm_read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return mm_read(in);
}

SolverMethod solver_method_from_name(const std::string& name) {
  if (name == "unpermuted") return SolverMethod::Unpermuted;
  if (name == "m1") return SolverMethod::M1;
  if (name == "m2") return SolverMethod::M2;
  if (name == "blocklu") return SolverMethod::BlockLU;
  if (name == "blocklu-ilu") return SolverMethod::BlockLUIlu;
  if (name == "direct") return SolverMethod::Direct;
  throw std::invalid_argument("unknown solver method: " + name);
}

std::string solver_method_name(SolverMethod method) {
  switch (method) {
    case SolverMethod::Unpermuted: return "unpermuted";
    case SolverMethod::M1: return "m1";
    case SolverMethod::M2: return "m2";
    case SolverMethod::BlockLU: return "blocklu";
    case SolverMethod::BlockLUIlu: return "blocklu-ilu";
    case SolverMethod::Direct: return "direct";
  }
  return "?";
}

void LinearSolver::prepare(const SparseMat& J) {
  if (config_.method == SolverMethod::Unpermuted) {
    // the truly unpreconditioned baseline operates on the raw system;
    // Jacobi scaling belongs to the reorder-and-partition stack
    scaled_ = J;
    scaling_.diagonal = VectorX::Ones(J.rows());
  } else {
    std::tie(scaled_, scaling_) = jacobi_scale(J);
  }
  has_partition_ = false;
  direct_.reset();

  switch (config_.method) {
    case SolverMethod::Direct: {
      Stopwatch timer;
      direct_ = std::make_shared<Eigen::SparseLU<ColMajorSparse>>();
      direct_->compute(ColMajorSparse(scaled_));
      if (direct_->info() != Eigen::Success)
        throw std::runtime_error("LinearSolver: sparse LU factorization failed");
      seconds_factor += timer.seconds();
      break;
    }
    case SolverMethod::Unpermuted:
      break;
    default: {
      Stopwatch reorder_timer;
      const ReorderResult reorder = laplacian_reorder(scaled_);
      perm_ = reorder.perm;
      seconds_reorder += reorder_timer.seconds();

      Stopwatch factor_timer;
      const SparseMat N = perm_.apply(scaled_);
      const BlockPartition partition = block_partition(N, reorder.sorted_values);
      const bool need_ilu = config_.method != SolverMethod::BlockLU;
      fact_ = prepare_factorization(partition, need_ilu);
      seconds_factor += factor_timer.seconds();
      has_partition_ = true;
      break;
    }
  }
  prepared_ = true;
}

VectorX LinearSolver::solve(const VectorX& rhs) {
  if (!prepared_) throw std::logic_error("LinearSolver: prepare() not called");
  Stopwatch timer;
  const VectorX d = scaling_.scale_rhs(rhs);
  VectorX w;
  Real iterations = 0;

  switch (config_.method) {
    case SolverMethod::Direct:
      w = direct_->solve(d);
      break;
    case SolverMethod::Unpermuted: {
      MatVec op = [this](const VectorX& x) { return VectorX(scaled_ * x); };
      const KrylovResult r = bicgstab(op, nullptr, d, config_.krylov_tol, config_.krylov_max_iter);
      if (r.breakdown) throw std::runtime_error("LinearSolver: BiCGStab breakdown");
      if (!r.converged) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "LinearSolver: BiCGStab did not converge (relative residual %.3e)",
                      r.relative_residual);
        throw std::runtime_error(buf);
      }
      w = r.x;
      iterations = r.iterations;
      break;
    }
    case SolverMethod::M1:
    case SolverMethod::M2: {
      const VectorX dp = perm_.apply(d);
      MatVec op = [this](const VectorX& x) {
        const Index s = fact_.s;
        VectorX y(x.size());
        y.head(s) = fact_.A * x.head(s) + fact_.B * x.tail(x.size() - s);
        y.tail(x.size() - s) = fact_.Ct * x.head(s) + fact_.D * x.tail(x.size() - s);
        return y;
      };
      MatVec prec = (config_.method == SolverMethod::M1)
                        ? make_m1_preconditioner(fact_, config_.inner_mode, config_.inner_steps)
                        : make_m2_preconditioner(fact_, config_.inner_mode, config_.inner_steps);
      const KrylovResult r = bicgstab(op, prec, dp, config_.krylov_tol, config_.krylov_max_iter);
      if (r.breakdown) throw std::runtime_error("LinearSolver: BiCGStab breakdown");
      if (!r.converged) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "LinearSolver: preconditioned BiCGStab did not converge (residual %.3e)",
                      r.relative_residual);
        throw std::runtime_error(buf);
      }
      w = perm_.apply_inverse(r.x);
      iterations = r.iterations;
      break;
    }
    case SolverMethod::BlockLU:
    case SolverMethod::BlockLUIlu: {
      const VectorX dp = perm_.apply(d);
      const BlockSolveResult r = block_lu_solve(fact_, dp, config_.krylov_tol,
                                                config_.krylov_max_iter,
                                                config_.method == SolverMethod::BlockLUIlu);
      w = perm_.apply_inverse(r.w);
      iterations = r.schur_iterations;
      break;
    }
  }

  seconds_solve += timer.seconds();
  last_iterations_ = iterations;
  total_iterations_ += iterations;
  ++solve_count_;
  return w;
}

}  // namespace dgadapt
