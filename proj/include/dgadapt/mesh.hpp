#ifndef DGADAPT_MESH_HPP
#define DGADAPT_MESH_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgadapt/types.hpp"

namespace dgadapt {

/// Classification of a mesh edge. Dirichlet and Neumann segments partition
/// the boundary; segment ids identify the boundary piece the data lives on.
struct EdgeKind {
  enum class Type { Interior, Dirichlet, Neumann };
  Type type = Type::Interior;
  int segment = -1;

  bool is_interior() const { return type == Type::Interior; }
  bool is_dirichlet() const { return type == Type::Dirichlet; }
  bool is_neumann() const { return type == Type::Neumann; }

  static EdgeKind interior() { return {Type::Interior, -1}; }
  static EdgeKind dirichlet(int segment) { return {Type::Dirichlet, segment}; }
  static EdgeKind neumann(int segment) { return {Type::Neumann, segment}; }
};

/// Maps a boundary-edge midpoint to its segment classification.
using BoundaryClassifier = std::function<EdgeKind(const Vector2& midpoint)>;

struct Triangle {
  std::array<Index, 3> v;     // CCW vertex indices
  int newest_vertex = 0;      // local index; opposite edge is the refinement edge
  std::array<Index, 3> edge;  // edge[i] lies opposite vertex i
};

struct Edge {
  Index v0 = -1, v1 = -1;          // endpoints, in stored orientation
  std::array<Index, 2> tri{-1, -1};       // adjacent triangles (tri[1] = -1 on boundary)
  std::array<int, 2> local_edge{-1, -1};  // local edge index within each triangle
  EdgeKind kind;

  bool boundary() const { return tri[1] < 0; }
};

/// Conforming triangulation with full edge topology and newest-vertex labels.
/// Immutable after construction: refinement returns a new mesh.
struct Mesh {
  std::vector<Vector2> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  std::vector<Index> parent;  // triangle id in the mesh this one was refined from (-1 if fresh)
  int generation = 0;
  BoundaryClassifier classifier;  // retained for mesh-file round trips

  Index num_triangles() const { return static_cast<Index>(triangles.size()); }
  Index num_vertices() const { return static_cast<Index>(vertices.size()); }

  Real area(Index t) const;
  Real diameter(Index t) const;        // longest side
  Real edge_length(Index e) const;
  Vector2 centroid(Index t) const;
  Vector2 edge_midpoint(Index e) const;
  /// Unit normal of edge e pointing out of tri[0] (into tri[1] or the exterior).
  Vector2 edge_normal(Index e) const;

  Real total_area() const;
  Real min_angle() const;
};

/// Builds edge topology from raw vertex/triangle arrays. Orientation is
/// normalized to CCW, hanging nodes are rejected, and each triangle gets its
/// initial newest-vertex label (opposite the longest edge, ties to the lowest
/// vertex index).
Mesh build_topology(std::vector<Vector2> vertices, std::vector<std::array<Index, 3>> triangles,
                    BoundaryClassifier classifier);

/// Newest-vertex bisection. Every marked triangle is split into four
/// children; the mesh is then completed so no hanging nodes remain.
Mesh bisect(const Mesh& mesh, const std::vector<Index>& marked);

/// bisect with every triangle marked.
Mesh uniform_refine(const Mesh& mesh);

/// Structured triangulation of [x0,x1] x [y0,y1]: nx x ny rectangles, each
/// split along its (low,low)-(high,high) diagonal.
Mesh structured_mesh(Real x0, Real y0, Real x1, Real y1, int nx, int ny,
                     BoundaryClassifier classifier);

/// Quadrature-point inflow flags for one triangle side of an edge:
/// true where b . n < 0 with n the outward normal of that triangle
/// (b . n = 0 counts as outflow).
inline bool is_inflow(Real b_dot_n) { return b_dot_n < 0.0; }

using VelocityField = std::function<Vector2(const Vector2&)>;

/// Inflow flags for every (triangle, local edge) pair at the supplied
/// points of each edge (parameterized from the edge's stored v0 to v1).
/// Result[t][local_edge][q].
std::vector<std::array<std::vector<bool>, 3>> inflow_classification(
    const Mesh& mesh, const VelocityField& b, const std::vector<Real>& edge_params);

/// Plain-text mesh: "#vertices" count then x y lines, "#triangles" count then
/// v0 v1 v2 lines.
Mesh read_mesh_text(std::istream& in, BoundaryClassifier classifier);
Mesh read_mesh_text_file(const std::string& path, BoundaryClassifier classifier);
void write_mesh_text(std::ostream& out, const Mesh& mesh);

/// Legacy-VTK (ASCII) unstructured grid of the triangulation.
void write_mesh_vtk(std::ostream& out, const Mesh& mesh);

}  // namespace dgadapt

#endif
