#include "plate/mesh.hpp"

#include "plate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace plate {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * cross(b - a, c - a);
}

int longest_edge(const std::vector<Point>& x, const Triangle& t) {
  int best = 0;
  double best_len = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double len = (x[t[(i + 2) % 3]] - x[t[(i + 1) % 3]]).norm();
    const double tol = 1e-12 * std::max(len, best_len);
    if (len > best_len + tol || (std::abs(len - best_len) <= tol && t[i] < t[best])) {
      best = i;
      best_len = std::max(len, best_len);
    }
  }
  return best;
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
           std::vector<int> refinement_edge, std::vector<int> parent)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      refinement_edge_(std::move(refinement_edge)),
      parent_(std::move(parent)) {
  validate_and_derive();
}

void Mesh::validate_and_derive() {
  const int nv = num_vertices();
  const int nt = num_triangles();
  if (nt == 0) throw MeshError("mesh has no triangles");
  if (!parent_.empty() && static_cast<int>(parent_.size()) != nt)
    throw MeshError("parent map length does not match the triangle count");

  area_.resize(nt);
  diameter_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri)
      if (v < 0 || v >= nv)
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " out of range");
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw MeshError("degenerate triangle " + std::to_string(t) + " (repeated vertex)");
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& c = vertices_[tri[2]];
    const double h = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    const double area = signed_area(a, b, c);
    if (std::abs(area) <= 1e-13 * h * h)
      throw MeshError("degenerate triangle " + std::to_string(t) + " (zero area)");
    if (area < 0.0)
      throw MeshError("inconsistent orientation: triangle " + std::to_string(t) +
                      " is clockwise");
    area_[t] = area;
    diameter_[t] = h;
  }

  if (refinement_edge_.empty()) {
    refinement_edge_.resize(nt);
    for (int t = 0; t < nt; ++t) refinement_edge_[t] = longest_edge(vertices_, triangles_[t]);
  } else if (static_cast<int>(refinement_edge_.size()) != nt) {
    throw MeshError("refinement-edge labeling length does not match the triangle count");
  }

  edges_.clear();
  edge_lookup_.clear();
  edge_lookup_.reserve(static_cast<std::size_t>(3 * nt));
  tri_edges_.assign(nt, {-1, -1, -1});
  tri_edge_sign_.assign(nt, {0, 0, 0});
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const auto key = edge_key(a, b);
      auto it = edge_lookup_.find(key);
      if (it == edge_lookup_.end()) {
        Edge e;
        e.vertices = {a, b};
        const Point d = vertices_[b] - vertices_[a];
        e.length = d.norm();
        e.tangent = d / e.length;
        e.normal = Point(e.tangent.y(), -e.tangent.x());
        e.midpoint = 0.5 * (vertices_[a] + vertices_[b]);
        e.t_plus = t;
        const int id = num_edges();
        edges_.push_back(e);
        edge_lookup_.emplace(key, id);
        tri_edges_[t][i] = id;
        tri_edge_sign_[t][i] = 1;
      } else {
        Edge& e = edges_[it->second];
        if (e.t_minus >= 0)
          throw MeshError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") has more than two adjacent triangles");
        if (e.vertices[0] != b || e.vertices[1] != a)
          throw MeshError("inconsistent orientation across edge (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
        e.t_minus = t;
        tri_edges_[t][i] = it->second;
        tri_edge_sign_[t][i] = -1;
      }
    }
  }

  boundary_vertex_.assign(nv, 0);
  n_interior_edges_ = 0;
  for (const auto& e : edges_) {
    if (e.boundary()) {
      boundary_vertex_[e.vertices[0]] = 1;
      boundary_vertex_[e.vertices[1]] = 1;
    } else {
      ++n_interior_edges_;
    }
  }

  patch_offset_.assign(nv + 1, 0);
  for (const auto& tri : triangles_)
    for (int v : tri) ++patch_offset_[v + 1];
  for (int v = 0; v < nv; ++v) {
    if (patch_offset_[v + 1] == 0)
      throw MeshError("vertex " + std::to_string(v) + " belongs to no triangle");
    patch_offset_[v + 1] += patch_offset_[v];
  }
  patch_.resize(patch_offset_[nv]);
  std::vector<int> fill(patch_offset_.begin(), patch_offset_.end() - 1);
  for (int t = 0; t < nt; ++t)
    for (int v : triangles_[t]) patch_[fill[v]++] = t;

  n_interior_vertices_ = 0;
  for (int v = 0; v < nv; ++v)
    if (!boundary_vertex_[v]) ++n_interior_vertices_;
}

int Mesh::local_edge_index(int t, int e) const {
  for (int i = 0; i < 3; ++i)
    if (tri_edges_[t][i] == e) return i;
  return -1;
}

int Mesh::find_edge(int a, int b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

Point Mesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

double Mesh::max_diameter() const { return *std::max_element(diameter_.begin(), diameter_.end()); }

double Mesh::total_area() const { return std::accumulate(area_.begin(), area_.end(), 0.0); }

Eigen::Vector3d Mesh::barycentric(int t, const Point& x) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  const double inv = 1.0 / (2.0 * area_[t]);
  const double l0 = cross(b - x, c - x) * inv;
  const double l1 = cross(c - x, a - x) * inv;
  return {l0, l1, 1.0 - l0 - l1};
}

int Mesh::num_boundary_loops() const {
  std::vector<int> root(num_vertices());
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int v) { return root[v] == v ? v : root[v] = find(root[v]); };
  for (const auto& e : edges_)
    if (e.boundary()) root[find(e.vertices[0])] = find(e.vertices[1]);
  int loops = 0;
  for (int v = 0; v < num_vertices(); ++v)
    if (boundary_vertex_[v] && find(v) == v) ++loops;
  return loops;
}

Mesh build_mesh(std::vector<Point> vertices, std::vector<Triangle> triangles) {
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point> x = mesh.vertices();
  const int nv = mesh.num_vertices();
  x.reserve(nv + mesh.num_edges());
  for (const auto& e : mesh.edges()) x.push_back(e.midpoint);

  std::vector<Triangle> tris;
  std::vector<int> parent;
  tris.reserve(4 * mesh.num_triangles());
  parent.reserve(4 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t);
    const int m0 = nv + mesh.triangle_edge(t, 0);
    const int m1 = nv + mesh.triangle_edge(t, 1);
    const int m2 = nv + mesh.triangle_edge(t, 2);
    tris.push_back({v[0], m2, m1});
    tris.push_back({m2, v[1], m0});
    tris.push_back({m1, m0, v[2]});
    tris.push_back({m0, m1, m2});
    parent.insert(parent.end(), 4, t);
  }
  return Mesh(std::move(x), std::move(tris), {}, std::move(parent));
}

Mesh refine_uniform(const Mesh& mesh, int levels) {
  Mesh m = mesh;
  for (int l = 0; l < levels; ++l) m = refine_uniform(m);
  return m;
}

Mesh refine_bisect(const Mesh& mesh, std::span<const int> marked) {
  const int nt = mesh.num_triangles();
  const int ne = mesh.num_edges();
  std::vector<char> edge_marked(ne, 0);
  for (int t : marked) {
    if (t < 0 || t >= nt) throw MeshError("marked triangle id " + std::to_string(t) + " out of range");
    edge_marked[mesh.triangle_edge(t, mesh.refinement_edge(t))] = 1;
  }

  // Closure: a triangle with any marked edge must also bisect its refinement edge.
  const int cap = ne + 2;
  for (int iter = 0;; ++iter) {
    if (iter > cap) throw MeshError("bisection closure exceeded its iteration cap; labeling corrupted");
    bool changed = false;
    for (int t = 0; t < nt; ++t) {
      const int ref = mesh.triangle_edge(t, mesh.refinement_edge(t));
      if (edge_marked[ref]) continue;
      for (int i = 0; i < 3; ++i) {
        if (edge_marked[mesh.triangle_edge(t, i)]) {
          edge_marked[ref] = 1;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }

  std::vector<Point> x = mesh.vertices();
  std::vector<int> mid(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (edge_marked[e]) {
      mid[e] = static_cast<int>(x.size());
      x.push_back(mesh.edge(e).midpoint);
    }
  }
  const int nv_old = mesh.num_vertices();
  auto midpoint_of = [&](int a, int b) {
    if (a >= nv_old || b >= nv_old) return -1;
    const int e = mesh.find_edge(a, b);
    return e < 0 ? -1 : mid[e];
  };

  std::vector<Triangle> tris;
  std::vector<int> labels;
  std::vector<int> parent;
  tris.reserve(2 * nt);
  std::function<void(const Triangle&, int, int)> split = [&](const Triangle& v, int ref, int par) {
    const int p = v[ref];
    const int q = v[(ref + 1) % 3];
    const int s = v[(ref + 2) % 3];
    const int m = midpoint_of(q, s);
    if (m < 0) {
      tris.push_back(v);
      labels.push_back(ref);
      parent.push_back(par);
      return;
    }
    // Children keep the new vertex m as newest vertex; their refinement edges
    // are the two remaining edges of the parent.
    split({p, q, m}, 2, par);
    split({p, m, s}, 1, par);
  };
  for (int t = 0; t < nt; ++t) split(mesh.triangle(t), mesh.refinement_edge(t), t);

  return Mesh(std::move(x), std::move(tris), std::move(labels), std::move(parent));
}

double shape_regularity(const Mesh& mesh) {
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t);
    double perimeter = 0.0;
    for (int i = 0; i < 3; ++i) perimeter += (mesh.vertex(v[(i + 1) % 3]) - mesh.vertex(v[i])).norm();
    const double rho = 2.0 * mesh.area(t) / perimeter;
    worst = std::max(worst, mesh.diameter(t) / rho);
  }
  return worst;
}

double min_angle(const Mesh& mesh) {
  double best = M_PI;
  for (const auto& v : mesh.triangles()) {
    for (int i = 0; i < 3; ++i) {
      const Point a = mesh.vertex(v[(i + 1) % 3]) - mesh.vertex(v[i]);
      const Point b = mesh.vertex(v[(i + 2) % 3]) - mesh.vertex(v[i]);
      best = std::min(best, std::atan2(std::abs(cross(a, b)), a.dot(b)));
    }
  }
  return best;
}

Mesh unit_square_mesh(int triangles) {
  if (triangles == 2) {
    return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
  }
  if (triangles == 4) {
    return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}},
                      {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
  }
  throw MeshError("unit square mesh supports 2 or 4 triangles, got " + std::to_string(triangles));
}

Mesh lshape_mesh() {
  return build_mesh({{-1, -1}, {0, -1}, {0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}},
                    {{0, 1, 2}, {0, 2, 7}, {7, 2, 5}, {7, 5, 6}, {2, 3, 4}, {2, 4, 5}});
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  long nv = -1;
  long nt = -1;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1)
    throw MeshError("mesh file '" + path + "': bad header, expected 'nv nt'");
  std::vector<Point> x(nv);
  for (long i = 0; i < nv; ++i)
    if (!(in >> x[i].x() >> x[i].y()))
      throw MeshError("mesh file '" + path + "': bad vertex line " + std::to_string(i));
  std::vector<Triangle> tris(nt);
  for (long i = 0; i < nt; ++i)
    if (!(in >> tris[i][0] >> tris[i][1] >> tris[i][2]))
      throw MeshError("mesh file '" + path + "': bad triangle line " + std::to_string(i));
  return build_mesh(std::move(x), std::move(tris));
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file '" + path + "'");
  out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (const auto& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

std::vector<int> ancestors(const std::vector<const Mesh*>& chain) {
  if (chain.empty()) throw MeshError("empty refinement chain");
  const Mesh& fine = *chain.back();
  std::vector<int> result(fine.num_triangles());
  std::iota(result.begin(), result.end(), 0);
  for (std::size_t k = chain.size() - 1; k >= 1; --k) {
    const auto& parents = chain[k]->parents();
    if (parents.empty()) throw MeshError("mesh in refinement chain has no parent map");
    for (int& a : result) a = parents[a];
  }
  return result;
}

}  // namespace plate
