#include "dgadapt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dgadapt {

namespace {

Real cross2(const Vector2& a, const Vector2& b) { return a.x() * b.y() - a.y() * b.x(); }

Real signed_area(const Vector2& a, const Vector2& b, const Vector2& c) {
  return 0.5 * cross2(b - a, c - a);
}

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Shared topology construction; newest-vertex labels are assigned by the
// caller (initial labeling or inherited from bisection).
Mesh assemble_mesh(std::vector<Vector2> vertices, std::vector<Triangle> triangles,
                   const std::function<EdgeKind(const Edge&, const Mesh&)>& classify_boundary) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.parent.assign(mesh.triangles.size(), -1);

  const Index nv = mesh.num_vertices();
  for (auto& t : mesh.triangles) {
    for (Index v : t.v)
      if (v < 0 || v >= nv) throw std::runtime_error("mesh: triangle vertex index out of range");
    const Real a2 = 2.0 * signed_area(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                      mesh.vertices[t.v[2]]);
    if (a2 == 0.0) throw std::runtime_error("mesh: degenerate triangle (zero area)");
    if (a2 < 0.0) {  // normalize to CCW, keeping vertex 0 so labels survive
      std::swap(t.v[1], t.v[2]);
      if (t.newest_vertex == 1)
        t.newest_vertex = 2;
      else if (t.newest_vertex == 2)
        t.newest_vertex = 1;
    }
  }

  std::unordered_map<std::uint64_t, Index> edge_of;
  edge_of.reserve(mesh.triangles.size() * 2);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    auto& tri = mesh.triangles[t];
    for (int le = 0; le < 3; ++le) {
      const Index a = tri.v[(le + 1) % 3];
      const Index b = tri.v[(le + 2) % 3];
      const auto key = edge_key(a, b);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.v0 = a;
        e.v1 = b;
        e.tri[0] = t;
        e.local_edge[0] = le;
        mesh.edges.push_back(e);
        edge_of.emplace(key, static_cast<Index>(mesh.edges.size()) - 1);
        tri.edge[le] = static_cast<Index>(mesh.edges.size()) - 1;
      } else {
        Edge& e = mesh.edges[it->second];
        if (e.tri[1] >= 0)
          throw std::runtime_error("mesh: non-conforming input (edge shared by three triangles)");
        e.tri[1] = t;
        e.local_edge[1] = le;
        tri.edge[le] = it->second;
      }
    }
  }

  // Hanging-node scan: a vertex sitting strictly inside another edge.
  // Quadratic, so only run at moderate size (inputs are coarse meshes;
  // refined meshes are conforming by construction).
  if (static_cast<std::size_t>(nv) * mesh.edges.size() <= 40'000'000) {
    for (const Edge& e : mesh.edges) {
      const Vector2& a = mesh.vertices[e.v0];
      const Vector2& b = mesh.vertices[e.v1];
      const Real len2 = (b - a).squaredNorm();
      for (Index v = 0; v < nv; ++v) {
        if (v == e.v0 || v == e.v1) continue;
        const Vector2& p = mesh.vertices[v];
        const Real t = (p - a).dot(b - a) / len2;
        if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
        const Vector2 foot = a + t * (b - a);
        if ((p - foot).squaredNorm() < 1e-24 * len2)
          throw std::runtime_error("mesh: hanging node detected");
      }
    }
  }

  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    Edge& edge = mesh.edges[e];
    edge.kind = edge.boundary() ? classify_boundary(edge, mesh) : EdgeKind::interior();
  }
  return mesh;
}

int initial_newest_vertex(const Mesh& mesh, const Triangle& t) {
  // Refinement edge = longest edge; ties go to the lowest opposite-vertex index.
  Real best = -1.0;
  int best_local = 0;
  for (int le = 0; le < 3; ++le) {
    const Vector2& a = mesh.vertices[t.v[(le + 1) % 3]];
    const Vector2& b = mesh.vertices[t.v[(le + 2) % 3]];
    const Real len2 = (b - a).squaredNorm();
    if (len2 > best ||
        (len2 == best && t.v[le] < t.v[best_local])) {
      best = len2;
      best_local = le;
    }
  }
  return best_local;
}

}  // namespace

Real Mesh::area(Index t) const {
  const Triangle& tri = triangles[t];
  return signed_area(vertices[tri.v[0]], vertices[tri.v[1]], vertices[tri.v[2]]);
}

Real Mesh::diameter(Index t) const {
  const Triangle& tri = triangles[t];
  Real d = 0;
  for (int i = 0; i < 3; ++i)
    d = std::max(d, (vertices[tri.v[(i + 1) % 3]] - vertices[tri.v[i]]).norm());
  return d;
}

Real Mesh::edge_length(Index e) const { return (vertices[edges[e].v1] - vertices[edges[e].v0]).norm(); }

Vector2 Mesh::centroid(Index t) const {
  const Triangle& tri = triangles[t];
  return (vertices[tri.v[0]] + vertices[tri.v[1]] + vertices[tri.v[2]]) / 3.0;
}

Vector2 Mesh::edge_midpoint(Index e) const {
  return 0.5 * (vertices[edges[e].v0] + vertices[edges[e].v1]);
}

Vector2 Mesh::edge_normal(Index e) const {
  const Edge& edge = edges[e];
  const Vector2 tangent = vertices[edge.v1] - vertices[edge.v0];
  Vector2 n(tangent.y(), -tangent.x());
  n.normalize();
  if (n.dot(edge_midpoint(e) - centroid(edge.tri[0])) < 0) n = -n;
  return n;
}

Real Mesh::total_area() const {
  Real a = 0;
  for (Index t = 0; t < num_triangles(); ++t) a += area(t);
  return a;
}

Real Mesh::min_angle() const {
  Real best = 1e300;
  for (const Triangle& tri : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Vector2 u = vertices[tri.v[(i + 1) % 3]] - vertices[tri.v[i]];
      const Vector2 w = vertices[tri.v[(i + 2) % 3]] - vertices[tri.v[i]];
      best = std::min(best, std::atan2(std::abs(cross2(u, w)), u.dot(w)));
    }
  }
  return best;
}

Mesh build_topology(std::vector<Vector2> vertices, std::vector<std::array<Index, 3>> triangles,
                    BoundaryClassifier classifier) {
  std::vector<Triangle> tris(triangles.size());
  for (std::size_t i = 0; i < triangles.size(); ++i) tris[i].v = triangles[i];

  Mesh mesh = assemble_mesh(std::move(vertices), std::move(tris),
                            [&classifier](const Edge& e, const Mesh& m) {
                              EdgeKind kind = classifier(0.5 * (m.vertices[e.v0] + m.vertices[e.v1]));
                              if (kind.is_interior())
                                throw std::runtime_error(
                                    "mesh: boundary edge matches no boundary segment");
                              return kind;
                            });
  for (auto& t : mesh.triangles) t.newest_vertex = initial_newest_vertex(mesh, t);
  mesh.classifier = std::move(classifier);
  return mesh;
}

Mesh bisect(const Mesh& mesh, const std::vector<Index>& marked) {
  const Index ne = static_cast<Index>(mesh.edges.size());
  std::vector<char> cut(ne, 0);
  for (Index t : marked) {
    if (t < 0 || t >= mesh.num_triangles())
      throw std::invalid_argument("bisect: marked id out of range");
    for (Index e : mesh.triangles[t].edge) cut[e] = 1;
  }

  if (std::none_of(cut.begin(), cut.end(), [](char c) { return c != 0; })) return mesh;

  // Closure: a triangle with any cut edge must have its refinement edge cut.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Triangle& t : mesh.triangles) {
      const Index ref_edge = t.edge[t.newest_vertex];
      if (cut[ref_edge]) continue;
      if (cut[t.edge[0]] || cut[t.edge[1]] || cut[t.edge[2]]) {
        cut[ref_edge] = 1;
        changed = true;
      }
    }
  }

  std::vector<Vector2> vertices = mesh.vertices;
  std::vector<Index> midpoint(ne, -1);
  // Boundary kinds of surviving and newly created boundary edges.
  std::map<std::uint64_t, EdgeKind> boundary_kind;
  for (const Edge& e : mesh.edges) {
    if (e.boundary()) boundary_kind.emplace(edge_key(e.v0, e.v1), e.kind);
  }
  for (Index e = 0; e < ne; ++e) {
    if (!cut[e]) continue;
    midpoint[e] = static_cast<Index>(vertices.size());
    vertices.push_back(mesh.edge_midpoint(e));
    if (mesh.edges[e].boundary()) {
      const EdgeKind kind = mesh.edges[e].kind;
      boundary_kind.emplace(edge_key(mesh.edges[e].v0, midpoint[e]), kind);
      boundary_kind.emplace(edge_key(midpoint[e], mesh.edges[e].v1), kind);
    }
  }

  std::vector<Triangle> out;
  std::vector<Index> parents;
  out.reserve(mesh.triangles.size() * 2);

  // Children of (v_p, v_q, v_r) with refinement edge (v_q, v_r) cut at mid:
  // (v_p, v_q, mid) and (v_p, mid, v_r), newest vertex mid. Each child's
  // refinement edge is one of the parent's other two original edges, so the
  // recursion stops after at most two levels.
  auto emit = [&](auto&& self, Index parent_id, const std::array<Index, 3>& v, int newest,
                  const std::array<Index, 3>& original_edge) -> void {
    const Index ref = original_edge[newest];
    if (ref < 0 || !cut[ref]) {
      Triangle t;
      t.v = v;
      t.newest_vertex = newest;
      out.push_back(t);
      parents.push_back(parent_id);
      return;
    }
    const Index mid = midpoint[ref];
    const Index vp = v[newest], vq = v[(newest + 1) % 3], vr = v[(newest + 2) % 3];
    // child (vp, vq, mid): newest local 2; its refinement edge (vp, vq) is the
    // parent edge opposite vr.
    self(self, parent_id, {vp, vq, mid}, 2,
         {-1, -1, original_edge[(newest + 2) % 3]});
    // child (vp, mid, vr): newest local 1; refinement edge (vr, vp) opposite vq.
    self(self, parent_id, {vp, mid, vr}, 1,
         {-1, original_edge[(newest + 1) % 3], -1});
  };

  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    emit(emit, t, tri.v, tri.newest_vertex, tri.edge);
  }

  Mesh refined = assemble_mesh(std::move(vertices), std::move(out),
                               [&boundary_kind](const Edge& e, const Mesh&) {
                                 auto it = boundary_kind.find(edge_key(e.v0, e.v1));
                                 if (it == boundary_kind.end())
                                   throw std::runtime_error(
                                       "bisect: internal error, unclassified boundary edge");
                                 return it->second;
                               });
  refined.parent = std::move(parents);
  refined.generation = mesh.generation + 1;
  refined.classifier = mesh.classifier;
  return refined;
}

Mesh uniform_refine(const Mesh& mesh) {
  std::vector<Index> all(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) all[t] = t;
  return bisect(mesh, all);
}

Mesh structured_mesh(Real x0, Real y0, Real x1, Real y1, int nx, int ny,
                     BoundaryClassifier classifier) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("structured_mesh: need nx, ny >= 1");
  std::vector<Vector2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);

  auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  std::vector<std::array<Index, 3>> tris;
  tris.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return build_topology(std::move(vertices), std::move(tris), std::move(classifier));
}

std::vector<std::array<std::vector<bool>, 3>> inflow_classification(
    const Mesh& mesh, const VelocityField& b, const std::vector<Real>& edge_params) {
  std::vector<std::array<std::vector<bool>, 3>> flags(mesh.num_triangles());
  for (Index e = 0; e < static_cast<Index>(mesh.edges.size()); ++e) {
    const Edge& edge = mesh.edges[e];
    const Vector2 n = mesh.edge_normal(e);  // out of tri[0]
    const Vector2 a = mesh.vertices[edge.v0];
    const Vector2 d = mesh.vertices[edge.v1] - a;
    for (int side = 0; side < 2; ++side) {
      if (edge.tri[side] < 0) continue;
      auto& per_edge = flags[edge.tri[side]][edge.local_edge[side]];
      per_edge.resize(edge_params.size());
      const Real sign = (side == 0) ? 1.0 : -1.0;
      for (std::size_t q = 0; q < edge_params.size(); ++q) {
        const Vector2 x = a + edge_params[q] * d;
        per_edge[q] = is_inflow(sign * b(x).dot(n));
      }
    }
  }
  return flags;
}

Mesh read_mesh_text(std::istream& in, BoundaryClassifier classifier) {
  Index nv = 0;
  if (!(in >> nv) || nv < 3) throw std::runtime_error("mesh file: bad vertex count");
  std::vector<Vector2> vertices(nv);
  for (Index i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x() >> vertices[i].y()))
      throw std::runtime_error("mesh file: bad vertex line");
  Index nt = 0;
  if (!(in >> nt) || nt < 1) throw std::runtime_error("mesh file: bad triangle count");
  std::vector<std::array<Index, 3>> tris(nt);
  for (Index i = 0; i < nt; ++i)
    if (!(in >> tris[i][0] >> tris[i][1] >> tris[i][2]))
      throw std::runtime_error("mesh file: bad triangle line");
  return build_topology(std::move(vertices), std::move(tris), std::move(classifier));
}

Mesh read_mesh_text_file(const std::string& path, BoundaryClassifier classifier) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return read_mesh_text(in, std::move(classifier));
}

void write_mesh_text(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << "\n";
  char line[80];
  for (const Vector2& v : mesh.vertices) {
    std::snprintf(line, sizeof line, "%.17g %.17g\n", v.x(), v.y());
    out << line;
  }
  out << mesh.num_triangles() << "\n";
  for (const Triangle& t : mesh.triangles)
    out << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
}

void write_mesh_vtk(std::ostream& out, const Mesh& mesh) {
  out << "# vtk DataFile Version 3.0\ndgadapt mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  char line[96];
  for (const Vector2& v : mesh.vertices) {
    std::snprintf(line, sizeof line, "%.17g %.17g 0\n", v.x(), v.y());
    out << line;
  }
  out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles() << "\n";
  for (const Triangle& t : mesh.triangles)
    out << "3 " << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
  out << "CELL_TYPES " << mesh.num_triangles() << "\n";
  for (Index t = 0; t < mesh.num_triangles(); ++t) out << "5\n";
}

}  // namespace dgadapt
