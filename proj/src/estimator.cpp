#include "dgadapt/estimator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dgadapt {

namespace {

Real rho_of(Real h, Real eps, Real kappa) {
  const Real diff = h / std::sqrt(eps);
  return kappa > 0.0 ? std::min(diff, 1.0 / std::sqrt(kappa)) : diff;
}

}  // namespace

std::vector<KappaInfo> compute_kappa(const DgSpace& space, const ProblemSpec& problem) {
  const Mesh& mesh = space.mesh();
  const auto& vol = space.volume_rule();
  std::vector<KappaInfo> out(problem.m());
  for (int c = 0; c < problem.m(); ++c) {
    const Component& comp = problem.components[c];
    Real lower = std::numeric_limits<Real>::infinity();
    Real upper = 0;
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const AffineMap& map = space.map(t);
      for (const Vector2& q : vol.points) {
        const Real div_b = comp.div_b(map.to_physical(q));
        lower = std::min(lower, comp.alpha - 0.5 * div_b);
        upper = std::max(upper, std::abs(-div_b + comp.alpha));
      }
    }
    out[c].kappa = std::max<Real>(0.0, lower);
    if (out[c].kappa > 0.0) out[c].kappa_star = upper / out[c].kappa;
  }
  return out;
}

std::vector<ErrorIndicators> compute_indicators(const DgSpace& space, const ProblemSpec& problem,
                                                const VectorX& U) {
  const Mesh& mesh = space.mesh();
  const int m = problem.m();
  const int nloc = space.nloc();
  const Index nel = mesh.num_triangles();
  const auto& vol = space.volume_rule();
  const auto& edge_rule = space.edge_rule();
  const auto kappas = compute_kappa(space, problem);

  std::vector<ErrorIndicators> out(m);
  for (int c = 0; c < m; ++c) {
    out[c].cell = VectorX::Zero(nel);
    out[c].edge_interior = VectorX::Zero(nel);
    out[c].edge_dirichlet = VectorX::Zero(nel);
    out[c].edge_neumann = VectorX::Zero(nel);
    out[c].kappa = kappas[c];
  }

  // cell residuals: rho_K^2 || f - alpha u + eps lap(u) - b.grad(u) - r(u) ||^2
  VectorX u_point(m);
  for (Index t = 0; t < nel; ++t) {
    const AffineMap& map = space.map(t);
    const Matrix2 G = map.inv_t.transpose() * map.inv_t;  // lap = G : ref Hessian
    const Real h_k = space.diameter(t);
    VectorX acc = VectorX::Zero(m);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      const Vector2 x = map.to_physical(vol.points[q]);
      for (int c = 0; c < m; ++c) {
        Real v = 0;
        for (int l = 0; l < nloc; ++l) v += U[space.dof_of(t, c, l)] * basis[l].value;
        u_point[c] = v;
      }
      for (int c = 0; c < m; ++c) {
        const Component& comp = problem.components[c];
        Vector2 g = Vector2::Zero();
        Real lap = 0;
        for (int l = 0; l < nloc; ++l) {
          const Real coef = U[space.dof_of(t, c, l)];
          g += coef * basis[l].grad;
          lap += coef * (G(0, 0) * basis[l].hxx + 2.0 * G(0, 1) * basis[l].hxy +
                         G(1, 1) * basis[l].hyy);
        }
        const Vector2 pg = map.inv_t * g;
        const Real res = comp.f(x) - comp.alpha * u_point[c] + comp.eps * lap -
                         comp.b(x).dot(pg) - problem.r(c, u_point);
        acc[c] += w * res * res;
      }
    }
    for (int c = 0; c < m; ++c) {
      const Real rho_k = rho_of(h_k, problem.components[c].eps, kappas[c].kappa);
      out[c].cell[t] = rho_k * rho_k * acc[c];
    }
  }

  // edge residuals
  const int nqe = static_cast<int>(edge_rule.points.size());
  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    const Edge& edge = mesh.edges[e];
    const Real h_e = mesh.edge_length(e);
    const Vector2 n = mesh.edge_normal(e);
    const Real sigma = space.sigma(edge);
    const Vector2 p0 = mesh.vertices[edge.v0];
    const Vector2 dir = mesh.vertices[edge.v1] - p0;

    const int o0 = space.edge_orientation(edge, 0);
    const Matrix2 invt0 = space.map(edge.tri[0]).inv_t;
    const int o1 = edge.boundary() ? 0 : space.edge_orientation(edge, 1);
    const Matrix2 invt1 = edge.boundary() ? Matrix2::Identity() : space.map(edge.tri[1]).inv_t;

    for (int c = 0; c < m; ++c) {
      const Component& comp = problem.components[c];
      const Real eps = comp.eps;
      const Real kappa = kappas[c].kappa;
      const Real rho_e = rho_of(h_e, eps, kappa);
      const Real jump_weight = eps * sigma / h_e + kappa * h_e + h_e / eps;

      Real flux_sq = 0, jump_sq = 0, data_sq = 0;
      for (int q = 0; q < nqe; ++q) {
        const Real w = edge_rule.weights[q] * h_e;
        const Vector2 x = p0 + edge_rule.points[q] * dir;
        const auto& b0 = space.edge_basis(edge.local_edge[0], o0, q);
        Real v0 = 0;
        Vector2 g0 = Vector2::Zero();
        for (int l = 0; l < nloc; ++l) {
          const Real coef = U[space.dof_of(edge.tri[0], c, l)];
          v0 += coef * b0[l].value;
          g0 += coef * b0[l].grad;
        }
        const Vector2 pg0 = invt0 * g0;

        if (edge.boundary()) {
          if (edge.kind.is_dirichlet()) {
            const Real diff = problem.g_dirichlet(c, edge.kind.segment, x) - v0;
            data_sq += w * diff * diff;
          } else {
            const Real diff = problem.g_neumann(c, edge.kind.segment, x) - eps * pg0.dot(n);
            data_sq += w * diff * diff;
          }
        } else {
          const auto& b1 = space.edge_basis(edge.local_edge[1], o1, q);
          Real v1 = 0;
          Vector2 g1 = Vector2::Zero();
          for (int l = 0; l < nloc; ++l) {
            const Real coef = U[space.dof_of(edge.tri[1], c, l)];
            v1 += coef * b1[l].value;
            g1 += coef * b1[l].grad;
          }
          const Real flux = eps * (pg0 - invt1 * g1).dot(n);
          flux_sq += w * flux * flux;
          jump_sq += w * (v0 - v1) * (v0 - v1);
        }
      }

      if (edge.boundary()) {
        if (edge.kind.is_dirichlet())
          out[c].edge_dirichlet[edge.tri[0]] += jump_weight * data_sq;
        else
          out[c].edge_neumann[edge.tri[0]] += rho_e / std::sqrt(eps) * data_sq;
      } else {
        const Real share =
            0.5 * rho_e / std::sqrt(eps) * flux_sq + 0.5 * jump_weight * jump_sq;
        out[c].edge_interior[edge.tri[0]] += share;
        out[c].edge_interior[edge.tri[1]] += share;
      }
    }
  }
  return out;
}

DataError compute_data_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U) {
  const Mesh& mesh = space.mesh();
  const int m = problem.m();
  const int nloc = space.nloc();
  const auto& vol = space.volume_rule();
  const auto& edge_rule = space.edge_rule();
  const auto kappas = compute_kappa(space, problem);
  DataError out;

  // Theta^2(f): projection residuals of f and b (alpha is constant per
  // component, so the (alpha - alpha_h) term vanishes identically).
  const int nq = static_cast<int>(vol.points.size());
  std::vector<Real> fq(nq);
  std::vector<Vector2> bq(nq), gq(nq);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    for (int c = 0; c < m; ++c) {
      const Component& comp = problem.components[c];
      VectorX fcoef = VectorX::Zero(nloc);
      VectorX bx = VectorX::Zero(nloc), by = VectorX::Zero(nloc);
      for (int q = 0; q < nq; ++q) {
        const auto& basis = space.volume_basis()[q];
        const Vector2 x = map.to_physical(vol.points[q]);
        fq[q] = comp.f(x);
        bq[q] = comp.b(x);
        Vector2 g = Vector2::Zero();
        for (int l = 0; l < nloc; ++l) g += U[space.dof_of(t, c, l)] * basis[l].grad;
        gq[q] = map.inv_t * g;
        for (int l = 0; l < nloc; ++l) {
          const Real w8 = 8.0 * vol.weights[q] * basis[l].value;
          fcoef[l] += w8 * fq[q];
          bx[l] += w8 * bq[q].x();
          by[l] += w8 * bq[q].y();
        }
      }
      Real acc = 0;
      for (int q = 0; q < nq; ++q) {
        const auto& basis = space.volume_basis()[q];
        Real fh = 0, bhx = 0, bhy = 0;
        for (int l = 0; l < nloc; ++l) {
          fh += fcoef[l] * basis[l].value;
          bhx += bx[l] * basis[l].value;
          bhy += by[l] * basis[l].value;
        }
        const Real w = vol.weights[q] * map.det;
        const Real df = fq[q] - fh;
        const Real db = (bq[q] - Vector2(bhx, bhy)).dot(gq[q]);
        acc += w * (df * df + db * db);
      }
      const Real rho_k = rho_of(space.diameter(t), comp.eps, kappas[c].kappa);
      out.f_part += rho_k * rho_k * acc;
    }
  }

  // boundary data against per-edge means
  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    const Edge& edge = mesh.edges[e];
    if (!edge.boundary()) continue;
    const Real h_e = mesh.edge_length(e);
    const Vector2 p0 = mesh.vertices[edge.v0];
    const Vector2 dir = mesh.vertices[edge.v1] - p0;
    const Real sigma = space.sigma(edge);
    for (int c = 0; c < m; ++c) {
      const Component& comp = problem.components[c];
      const Real kappa = kappas[c].kappa;
      auto g_at = [&](const Vector2& x) {
        return edge.kind.is_dirichlet() ? problem.g_dirichlet(c, edge.kind.segment, x)
                                        : problem.g_neumann(c, edge.kind.segment, x);
      };
      Real mean = 0;
      for (std::size_t q = 0; q < edge_rule.points.size(); ++q)
        mean += edge_rule.weights[q] * g_at(p0 + edge_rule.points[q] * dir);
      Real dev = 0;
      for (std::size_t q = 0; q < edge_rule.points.size(); ++q) {
        const Real d = g_at(p0 + edge_rule.points[q] * dir) - mean;
        dev += edge_rule.weights[q] * h_e * d * d;
      }
      if (edge.kind.is_dirichlet()) {
        out.dirichlet_part += (comp.eps * sigma / h_e + kappa * h_e + h_e / comp.eps) * dev;
      } else {
        const Real rho_e = rho_of(h_e, comp.eps, kappa);
        out.neumann_part += rho_e / std::sqrt(comp.eps) * dev;
      }
    }
  }
  return out;
}

std::vector<Index> dorfler_mark(const std::vector<VectorX>& eta_squared, Real theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("dorfler_mark: theta must lie in (0,1)");
  std::vector<char> marked_flag;
  for (const VectorX& eta2 : eta_squared) {
    const Index n = static_cast<Index>(eta2.size());
    if (marked_flag.empty()) marked_flag.assign(n, 0);
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return eta2[a] > eta2[b]; });
    const Real target = theta * eta2.sum();
    Real acc = 0;
    Index taken = 0;
    while (acc < target && taken < n) {
      acc += eta2[order[taken]];
      marked_flag[order[taken]] = 1;
      ++taken;
    }
    // greedy minimality: dropping the last pick must break the bulk criterion
    assert(taken == 0 || acc - eta2[order[taken - 1]] < target);
  }
  std::vector<Index> marked;
  for (Index t = 0; t < static_cast<Index>(marked_flag.size()); ++t)
    if (marked_flag[t]) marked.push_back(t);
  return marked;
}

}  // namespace dgadapt
