#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace plate {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

/// Oriented mesh edge. The tangent runs from A to B, the normal is the
/// tangent rotated clockwise and coincides with the outer normal of t_plus.
struct Edge {
  std::array<int, 2> vertices{-1, -1};
  Point normal = Point::Zero();
  Point tangent = Point::Zero();
  Point midpoint = Point::Zero();
  double length = 0.0;
  int t_plus = -1;
  int t_minus = -1;

  [[nodiscard]] bool boundary() const noexcept { return t_minus < 0; }
};

/// Immutable conforming triangulation. Triangles are counterclockwise; local
/// edge i is the edge opposite local vertex i.
class Mesh {
public:
  /// Validates the input and derives edges, patches and the refinement-edge
  /// labeling. An empty `refinement_edge` selects the longest edge of each
  /// triangle (ties: smallest opposite vertex id).
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
       std::vector<int> refinement_edge = {}, std::vector<int> parent = {});

  [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const Point& vertex(int v) const { return vertices_[v]; }
  [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  [[nodiscard]] const Triangle& triangle(int t) const { return triangles_[t]; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const Edge& edge(int e) const { return edges_[e]; }

  /// Edge opposite local vertex i of triangle t.
  [[nodiscard]] int triangle_edge(int t, int i) const { return tri_edges_[t][i]; }
  /// +1 if the global edge normal is the outer normal of t on that edge, else -1.
  [[nodiscard]] int edge_sign(int t, int i) const { return tri_edge_sign_[t][i]; }
  /// Local index of edge e in triangle t, or -1.
  [[nodiscard]] int local_edge_index(int t, int e) const;
  /// Edge id joining vertices a and b, or -1.
  [[nodiscard]] int find_edge(int a, int b) const;

  [[nodiscard]] bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  [[nodiscard]] int num_interior_vertices() const noexcept { return n_interior_vertices_; }
  [[nodiscard]] int num_interior_edges() const noexcept { return n_interior_edges_; }

  /// T(z): triangles containing vertex z, in increasing id order.
  [[nodiscard]] std::span<const int> vertex_patch(int v) const {
    return {patch_.data() + patch_offset_[v], patch_.data() + patch_offset_[v + 1]};
  }

  [[nodiscard]] double area(int t) const { return area_[t]; }
  [[nodiscard]] double diameter(int t) const { return diameter_[t]; }
  [[nodiscard]] Point centroid(int t) const;
  [[nodiscard]] double max_diameter() const;
  [[nodiscard]] double total_area() const;
  /// Barycentric coordinates of x with respect to triangle t.
  [[nodiscard]] Eigen::Vector3d barycentric(int t, const Point& x) const;

  [[nodiscard]] int refinement_edge(int t) const { return refinement_edge_[t]; }
  [[nodiscard]] const std::vector<int>& refinement_edges() const noexcept { return refinement_edge_; }
  /// Parent triangle in the mesh this one was refined from (empty for initial meshes).
  [[nodiscard]] const std::vector<int>& parents() const noexcept { return parent_; }

  /// Number of closed boundary polygons; holes = loops - 1 for a connected mesh.
  [[nodiscard]] int num_boundary_loops() const;

private:
  void validate_and_derive();

  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<int> refinement_edge_;
  std::vector<int> parent_;

  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<signed char, 3>> tri_edge_sign_;
  std::vector<char> boundary_vertex_;
  std::vector<int> patch_offset_;
  std::vector<int> patch_;
  std::vector<double> area_;
  std::vector<double> diameter_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  int n_interior_vertices_ = 0;
  int n_interior_edges_ = 0;
};

[[nodiscard]] Mesh build_mesh(std::vector<Point> vertices, std::vector<Triangle> triangles);

/// Red refinement: every triangle into four similar children.
[[nodiscard]] Mesh refine_uniform(const Mesh& mesh);

/// Newest-vertex bisection of the marked triangles plus conforming closure.
[[nodiscard]] Mesh refine_bisect(const Mesh& mesh, std::span<const int> marked);

/// max over T of h_T / rho_T with the inradius rho_T = 2|T| / perimeter.
[[nodiscard]] double shape_regularity(const Mesh& mesh);

/// Smallest interior angle over all triangles (radians).
[[nodiscard]] double min_angle(const Mesh& mesh);

/// Unit square split into 2 triangles (diagonal (0,0)-(1,1)) or 4 (criss-cross).
[[nodiscard]] Mesh unit_square_mesh(int triangles = 2);

/// (-1,1)^2 minus [0,1) x (-1,0], six triangles.
[[nodiscard]] Mesh lshape_mesh();

/// Plain-text mesh: "nv nt", nv lines "x y", nt lines "i j k" (0-based).
[[nodiscard]] Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

/// Applies refine_uniform `levels` times.
[[nodiscard]] Mesh refine_uniform(const Mesh& mesh, int levels);

/// For a refinement chain ordered coarse to fine, the coarse ancestor of
/// every triangle of the last mesh.
[[nodiscard]] std::vector<int> ancestors(const std::vector<const Mesh*>& chain);

}  // namespace plate
