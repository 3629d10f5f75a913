#include "dgadapt/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace dgadapt {

namespace {

// Trace data of one element along one edge, at the shared edge quadrature points.
struct EdgeSide {
  Index element = -1;
  int comp_offset = 0;  // filled per component
  const DgSpace* space = nullptr;
  int local_edge = 0;
  int orientation = 0;
  Matrix2 inv_t;

  const std::vector<BasisPoint>& basis(int q) const {
    return space->edge_basis(local_edge, orientation, q);
  }
  Vector2 phys_grad(int q, int l) const { return inv_t * basis(q)[l].grad; }
};

EdgeSide make_side(const DgSpace& space, const Edge& e, int side) {
  EdgeSide s;
  s.space = &space;
  s.element = e.tri[side];
  s.local_edge = e.local_edge[side];
  s.orientation = space.edge_orientation(e, side);
  s.inv_t = space.map(s.element).inv_t;
  return s;
}

}  // namespace

BlockSparseMatrix assemble_stiffness(const DgSpace& space, const ProblemSpec& problem) {
  const Mesh& mesh = space.mesh();
  const int m = problem.m();
  if (m != space.components())
    throw std::invalid_argument("assemble_stiffness: component count mismatch");
  const int nloc = space.nloc();
  BlockSparseMatrix S(mesh, m * nloc);

  const auto& vol = space.volume_rule();
  const auto& edge_rule = space.edge_rule();
  const int nq = static_cast<int>(vol.points.size());
  const int nqe = static_cast<int>(edge_rule.points.size());

  std::vector<Vector2> pg(nloc);

  // volume terms
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    MatrixX& diag = S.block(t, t);
    for (int q = 0; q < nq; ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      const Vector2 x = map.to_physical(vol.points[q]);
      for (int l = 0; l < nloc; ++l) pg[l] = map.inv_t * basis[l].grad;
      for (int c = 0; c < m; ++c) {
        const Component& comp = problem.components[c];
        const Vector2 b = comp.b(x);
        const int off = c * nloc;
        for (int a = 0; a < nloc; ++a) {
          for (int bi = 0; bi < nloc; ++bi) {
            diag(off + a, off + bi) +=
                w * (comp.eps * pg[bi].dot(pg[a]) +
                     (b.dot(pg[bi]) + comp.alpha * basis[bi].value) * basis[a].value);
          }
        }
      }
    }
  }

  // edge terms
  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    const Edge& edge = mesh.edges[e];
    const Real h_e = mesh.edge_length(e);
    const Vector2 n = mesh.edge_normal(e);
    const Real sigma = space.sigma(edge);
    const Vector2 p0 = mesh.vertices[edge.v0];
    const Vector2 dir = mesh.vertices[edge.v1] - p0;

    const EdgeSide side_i = make_side(space, edge, 0);
    const bool interior = !edge.boundary();
    const EdgeSide side_j = interior ? make_side(space, edge, 1) : EdgeSide{};

    for (int q = 0; q < nqe; ++q) {
      const Real w = edge_rule.weights[q] * h_e;
      const Vector2 x = p0 + edge_rule.points[q] * dir;
      const auto& bi = side_i.basis(q);

      for (int c = 0; c < m; ++c) {
        const Component& comp = problem.components[c];
        const Real eps = comp.eps;
        const Real s_bn = comp.b(x).dot(n);
        const int off = c * nloc;

        if (interior) {
          const auto& bj = side_j.basis(q);
          MatrixX& Aii = S.block(side_i.element, side_i.element);
          MatrixX& Aij = S.block(side_i.element, side_j.element);
          MatrixX& Aji = S.block(side_j.element, side_i.element);
          MatrixX& Ajj = S.block(side_j.element, side_j.element);

          for (int a = 0; a < nloc; ++a) {
            const Real va_i = bi[a].value, va_j = bj[a].value;
            const Real dna_i = side_i.phys_grad(q, a).dot(n);
            const Real dna_j = side_j.phys_grad(q, a).dot(n);
            for (int b = 0; b < nloc; ++b) {
              const Real vb_i = bi[b].value, vb_j = bj[b].value;
              const Real dnb_i = side_i.phys_grad(q, b).dot(n);
              const Real dnb_j = side_j.phys_grad(q, b).dot(n);

              // -{eps grad u}.[v] - {eps grad v}.[u] + sigma eps / h [u].[v]
              Aii(off + a, off + b) +=
                  w * (-0.5 * eps * (dnb_i * va_i + dna_i * vb_i) + sigma * eps / h_e * vb_i * va_i);
              Aij(off + a, off + b) +=
                  w * (-0.5 * eps * dnb_j * va_i + 0.5 * eps * dna_i * vb_j -
                       sigma * eps / h_e * vb_j * va_i);
              Aji(off + a, off + b) +=
                  w * (0.5 * eps * dnb_i * va_j - 0.5 * eps * dna_j * vb_i -
                       sigma * eps / h_e * vb_i * va_j);
              Ajj(off + a, off + b) +=
                  w * (0.5 * eps * (dnb_j * va_j + dna_j * vb_j) + sigma * eps / h_e * vb_j * va_j);

              // upwind: b.n (u_out - u_in) v on the inflow side
              if (s_bn < 0.0) {
                Aii(off + a, off + b) += w * (-s_bn) * vb_i * va_i;
                Aij(off + a, off + b) += w * s_bn * vb_j * va_i;
              } else if (s_bn > 0.0) {
                Ajj(off + a, off + b) += w * s_bn * vb_j * va_j;
                Aji(off + a, off + b) += w * (-s_bn) * vb_i * va_j;
              }
            }
          }
        } else {
          MatrixX& Aii = S.block(side_i.element, side_i.element);
          const bool penalized = edge.kind.is_dirichlet();
          for (int a = 0; a < nloc; ++a) {
            const Real va = bi[a].value;
            const Real dna = side_i.phys_grad(q, a).dot(n);
            for (int b = 0; b < nloc; ++b) {
              const Real vb = bi[b].value;
              const Real dnb = side_i.phys_grad(q, b).dot(n);
              if (penalized)
                Aii(off + a, off + b) +=
                    w * (-eps * (dnb * va + dna * vb) + sigma * eps / h_e * vb * va);
              if (s_bn < 0.0) Aii(off + a, off + b) += w * (-s_bn) * vb * va;
            }
          }
        }
      }
    }
  }
  return S;
}

VectorX assemble_load(const DgSpace& space, const ProblemSpec& problem) {
  const Mesh& mesh = space.mesh();
  const int m = problem.m();
  const int nloc = space.nloc();
  VectorX L = VectorX::Zero(space.dof());

  const auto& vol = space.volume_rule();
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      const Vector2 x = map.to_physical(vol.points[q]);
      for (int c = 0; c < m; ++c) {
        const Real f = problem.components[c].f(x);
        if (f == 0.0) continue;
        for (int a = 0; a < nloc; ++a) L[space.dof_of(t, c, a)] += w * f * basis[a].value;
      }
    }
  }

  const auto& edge_rule = space.edge_rule();
  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    const Edge& edge = mesh.edges[e];
    if (!edge.boundary()) continue;
    const Real h_e = mesh.edge_length(e);
    const Vector2 n = mesh.edge_normal(e);
    const Real sigma = space.sigma(edge);
    const Vector2 p0 = mesh.vertices[edge.v0];
    const Vector2 dir = mesh.vertices[edge.v1] - p0;
    const EdgeSide side = make_side(space, edge, 0);

    for (std::size_t q = 0; q < edge_rule.points.size(); ++q) {
      const Real w = edge_rule.weights[q] * h_e;
      const Vector2 x = p0 + edge_rule.points[q] * dir;
      const auto& basis = side.basis(static_cast<int>(q));
      for (int c = 0; c < m; ++c) {
        const Component& comp = problem.components[c];
        const Real s_bn = comp.b(x).dot(n);
        if (edge.kind.is_dirichlet()) {
          const Real g = problem.g_dirichlet(c, edge.kind.segment, x);
          for (int a = 0; a < nloc; ++a) {
            const Real dna = side.phys_grad(static_cast<int>(q), a).dot(n);
            Real v = g * (sigma * comp.eps / h_e * basis[a].value - comp.eps * dna);
            if (s_bn < 0.0) v += (-s_bn) * g * basis[a].value;
            L[space.dof_of(side.element, c, a)] += w * v;
          }
        } else {
          const Real g = problem.g_neumann(c, edge.kind.segment, x);
          if (g == 0.0) continue;
          for (int a = 0; a < nloc; ++a)
            L[space.dof_of(side.element, c, a)] += w * g * basis[a].value;
        }
      }
    }
  }
  return L;
}

void assemble_nonlinear(const DgSpace& space, const ProblemSpec& problem, const VectorX& U,
                        VectorX* h, BlockSparseMatrix* jacobian) {
  const Mesh& mesh = space.mesh();
  const int m = problem.m();
  const int nloc = space.nloc();
  if (U.size() != space.dof()) throw std::invalid_argument("assemble_nonlinear: bad U length");
  if (h) h->setZero(space.dof());
  if (jacobian) *jacobian = BlockSparseMatrix::diagonal(mesh.num_triangles(), m * nloc);
  if (!problem.has_reaction()) return;

  const auto& vol = space.volume_rule();
  VectorX u_point(m);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    MatrixX* diag = jacobian ? &jacobian->block(t, t) : nullptr;
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      for (int c = 0; c < m; ++c) {
        Real u = 0;
        for (int l = 0; l < nloc; ++l) u += U[space.dof_of(t, c, l)] * basis[l].value;
        u_point[c] = u;
      }
      for (int i = 0; i < m; ++i) {
        if (h) {
          const Real ri = problem.r(i, u_point);
          for (int a = 0; a < nloc; ++a)
            (*h)[space.dof_of(t, i, a)] += w * ri * basis[a].value;
        }
        if (diag) {
          for (int j = 0; j < m; ++j) {
            const Real rij = problem.dr(i, j, u_point);
            if (rij == 0.0) continue;
            for (int a = 0; a < nloc; ++a)
              for (int b = 0; b < nloc; ++b)
                (*diag)(i * nloc + a, j * nloc + b) += w * rij * basis[b].value * basis[a].value;
          }
        }
      }
    }
  }
}

VectorX AssembledSystem::h(const VectorX& U) const {
  VectorX out;
  assemble_nonlinear(*space, *problem, U, &out, nullptr);
  return out;
}

VectorX AssembledSystem::residual(const VectorX& U) const {
  if (U.size() != L.size()) throw std::invalid_argument("residual: dimension mismatch");
  VectorX R = S_csr * U - L;
  if (problem->has_reaction()) R += h(U);
  return R;
}

SparseMat AssembledSystem::jacobian(const VectorX& U0) const {
  if (!problem->has_reaction()) return S_csr;
  BlockSparseMatrix J = S;
  BlockSparseMatrix Jr;
  assemble_nonlinear(*space, *problem, U0, nullptr, &Jr);
  J.add(Jr);
  return J.to_csr();
}

AssembledSystem assemble_system(const DgSpace& space, const ProblemSpec& problem) {
  AssembledSystem sys;
  sys.space = &space;
  sys.problem = &problem;
  sys.S = assemble_stiffness(space, problem);
  sys.S_csr = sys.S.to_csr();
  sys.L = assemble_load(space, problem);
  return sys;
}

namespace {

// Jump terms shared by energy_norm and energy_error. `trace` evaluates the
// function whose jump is measured; exact data enters through `boundary_value`.
template <typename TraceFn, typename BoundaryFn>
Real jump_terms(const DgSpace& space, const ProblemSpec& problem, TraceFn&& trace,
                BoundaryFn&& boundary_value) {
  const Mesh& mesh = space.mesh();
  const auto& rule = space.edge_rule();
  Real total = 0;
  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    const Edge& edge = mesh.edges[e];
    if (edge.kind.is_neumann()) continue;
    const Real h_e = mesh.edge_length(e);
    const Real sigma = space.sigma(edge);
    const Vector2 p0 = mesh.vertices[edge.v0];
    const Vector2 dir = mesh.vertices[edge.v1] - p0;
    for (int c = 0; c < problem.m(); ++c) {
      const Real weight = problem.components[c].eps * sigma / h_e;
      Real acc = 0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Vector2 x = p0 + rule.points[q] * dir;
        Real jump;
        if (edge.boundary()) {
          jump = boundary_value(c, edge, x) - trace(c, edge, 0, static_cast<int>(q));
        } else {
          jump = trace(c, edge, 0, static_cast<int>(q)) - trace(c, edge, 1, static_cast<int>(q));
        }
        acc += rule.weights[q] * h_e * jump * jump;
      }
      total += weight * acc;
    }
  }
  return total;
}

Real trace_value(const DgSpace& space, const VectorX& coeffs, const Edge& edge, int side, int c,
                 int q) {
  const int o = space.edge_orientation(edge, side);
  const auto& basis = space.edge_basis(edge.local_edge[side], o, q);
  Real v = 0;
  for (int l = 0; l < space.nloc(); ++l)
    v += coeffs[space.dof_of(edge.tri[side], c, l)] * basis[l].value;
  return v;
}

}  // namespace

Real energy_norm(const DgSpace& space, const ProblemSpec& problem, const VectorX& coeffs,
                 const std::vector<Real>& kappa) {
  const Mesh& mesh = space.mesh();
  const auto& vol = space.volume_rule();
  const int nloc = space.nloc();
  Real total = 0;

  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      for (int c = 0; c < problem.m(); ++c) {
        Real v = 0;
        Vector2 g = Vector2::Zero();
        for (int l = 0; l < nloc; ++l) {
          const Real u = coeffs[space.dof_of(t, c, l)];
          v += u * basis[l].value;
          g += u * basis[l].grad;
        }
        const Vector2 pg = map.inv_t * g;
        total += w * (problem.components[c].eps * pg.squaredNorm() + kappa[c] * v * v);
      }
    }
  }

  total += jump_terms(
      space, problem,
      [&](int c, const Edge& e, int side, int q) { return trace_value(space, coeffs, e, side, c, q); },
      [&](int, const Edge&, const Vector2&) { return 0.0; });
  return std::sqrt(total);
}

Real energy_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U,
                  const std::vector<Real>& kappa) {
  if (!problem.has_exact()) throw std::logic_error("energy_error: no exact solution");
  const Mesh& mesh = space.mesh();
  const auto& vol = space.volume_rule();
  const int nloc = space.nloc();
  Real total = 0;

  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      const Vector2 x = map.to_physical(vol.points[q]);
      for (int c = 0; c < problem.m(); ++c) {
        const Component& comp = problem.components[c];
        Real v = 0;
        Vector2 g = Vector2::Zero();
        for (int l = 0; l < nloc; ++l) {
          const Real u = U[space.dof_of(t, c, l)];
          v += u * basis[l].value;
          g += u * basis[l].grad;
        }
        const Real ev = comp.exact(x) - v;
        const Vector2 eg = comp.exact_grad(x) - map.inv_t * g;
        total += w * (comp.eps * eg.squaredNorm() + kappa[c] * ev * ev);
      }
    }
  }

  // [u - u_h] = -[u_h] on interior edges; g - u_h on Dirichlet edges.
  total += jump_terms(
      space, problem,
      [&](int c, const Edge& e, int side, int q) { return trace_value(space, U, e, side, c, q); },
      [&](int c, const Edge&, const Vector2& x) { return problem.components[c].exact(x); });
  return std::sqrt(total);
}

Real l2_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U) {
  if (!problem.has_exact()) throw std::logic_error("l2_error: no exact solution");
  const Mesh& mesh = space.mesh();
  const auto& vol = space.volume_rule();
  Real total = 0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Real w = vol.weights[q] * map.det;
      const Vector2 x = map.to_physical(vol.points[q]);
      for (int c = 0; c < problem.m(); ++c) {
        Real v = 0;
        for (int l = 0; l < space.nloc(); ++l)
          v += U[space.dof_of(t, c, l)] * basis[l].value;
        const Real ev = problem.components[c].exact(x) - v;
        total += w * ev * ev;
      }
    }
  }
  return std::sqrt(total);
}

VectorX l2_project(const DgSpace& space, const std::function<Real(int, const Vector2&)>& f) {
  const Mesh& mesh = space.mesh();
  const auto& vol = space.volume_rule();
  VectorX coeffs = VectorX::Zero(space.dof());
  // reference mass matrix is I/8, so the projection is one weighted sum per dof
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.map(t);
    for (std::size_t q = 0; q < vol.points.size(); ++q) {
      const auto& basis = space.volume_basis()[q];
      const Vector2 x = map.to_physical(vol.points[q]);
      for (int c = 0; c < space.components(); ++c) {
        const Real v = f(c, x);
        for (int l = 0; l < space.nloc(); ++l)
          coeffs[space.dof_of(t, c, l)] += 8.0 * vol.weights[q] * v * basis[l].value;
      }
    }
  }
  return coeffs;
}

Real max_nodal_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U) {
  if (!problem.has_exact()) throw std::logic_error("max_nodal_error: no exact solution");
  static const Vector2 corners[3] = {Vector2(0, 0), Vector2(1, 0), Vector2(0, 1)};
  const Mesh& mesh = space.mesh();
  Real worst = 0;
  std::vector<std::vector<BasisPoint>> corner_basis;
  for (const Vector2& corner : corners)
    corner_basis.push_back(dubiner_tabulate(space.degree(), corner));
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    for (int corner = 0; corner < 3; ++corner) {
      const Vector2 x = mesh.vertices[mesh.triangles[t].v[corner]];
      for (int c = 0; c < problem.m(); ++c) {
        Real v = 0;
        for (int l = 0; l < space.nloc(); ++l)
          v += U[space.dof_of(t, c, l)] * corner_basis[corner][l].value;
        worst = std::max(worst, std::abs(v - problem.components[c].exact(x)));
      }
    }
  }
  return worst;
}

}  // namespace dgadapt
