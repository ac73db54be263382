#include "plate/spaces.hpp"

#include "plate/errors.hpp"
#include "plate/quadrature.hpp"

#include <cmath>

namespace plate {

const char* to_string(SpaceKind k) noexcept {
  switch (k) {
    case SpaceKind::Morley: return "Morley";
    case SpaceKind::DGP2: return "dG-P2";
    case SpaceKind::C0IP: return "C0IP-S20";
    case SpaceKind::HCT: return "HCT";
  }
  return "?";
}

ElementKind element_kind(SpaceKind k) noexcept {
  switch (k) {
    case SpaceKind::Morley: return ElementKind::Morley;
    case SpaceKind::HCT: return ElementKind::HCT;
    default: return ElementKind::P2Lagrange;
  }
}

DofMap::DofMap(std::shared_ptr<const Mesh> mesh, SpaceKind kind) : mesh_(std::move(mesh)), kind_(kind) {
  if (!mesh_) throw Error("DofMap requires a mesh");
  const Mesh& m = *mesh_;
  const int nt = m.num_triangles();
  shapes_.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const Triangle& tri = m.triangle(t);
    shapes_.emplace_back(element_kind(kind_), std::array<Point, 3>{m.vertex(tri[0]), m.vertex(tri[1]), m.vertex(tri[2])});
  }
  local_size_ = kind_ == SpaceKind::HCT ? 12 : 6;
  l2g_.assign(static_cast<std::size_t>(nt) * local_size_, -1);
  sign_.assign(l2g_.size(), 1.0);

  if (kind_ == SpaceKind::DGP2) {
    for (int t = 0; t < nt; ++t) {
      const Triangle& tri = m.triangle(t);
      for (int i = 0; i < 3; ++i) dofs_.push_back({DofKind::VertexValue, t, m.vertex(tri[i])});
      for (int i = 0; i < 3; ++i)
        dofs_.push_back({DofKind::EdgeMidpointValue, t, 0.5 * (m.vertex(tri[(i + 1) % 3]) + m.vertex(tri[(i + 2) % 3]))});
      for (int i = 0; i < 6; ++i) l2g_[6 * t + i] = 6 * t + i;
    }
    return;
  }

  const bool hct = kind_ == SpaceKind::HCT;
  vertex_dof_.assign(m.num_vertices(), -1);
  edge_dof_.assign(m.num_edges(), -1);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.is_boundary_vertex(v)) {
      n_constrained_ += hct ? 3 : 1;
      continue;
    }
    vertex_dof_[v] = size();
    dofs_.push_back({DofKind::VertexValue, v, m.vertex(v)});
    if (hct) {
      dofs_.push_back({DofKind::VertexGradientX, v, m.vertex(v)});
      dofs_.push_back({DofKind::VertexGradientY, v, m.vertex(v)});
    }
  }
  const DofKind edge_kind = kind_ == SpaceKind::Morley ? DofKind::EdgeNormalMean
                            : hct                      ? DofKind::EdgeMidpointNormal
                                                       : DofKind::EdgeMidpointValue;
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.edge(e).boundary()) {
      ++n_constrained_;
      continue;
    }
    edge_dof_[e] = size();
    dofs_.push_back({edge_kind, e, m.edge(e).midpoint});
  }

  for (int t = 0; t < nt; ++t) {
    const Triangle& tri = m.triangle(t);
    int* g = l2g_.data() + static_cast<std::size_t>(t) * local_size_;
    double* s = sign_.data() + static_cast<std::size_t>(t) * local_size_;
    for (int i = 0; i < 3; ++i) {
      const int vd = vertex_dof_[tri[i]];
      g[i] = vd;
      if (hct && vd >= 0) {
        g[3 + 2 * i] = vd + 1;
        g[4 + 2 * i] = vd + 2;
      }
    }
    const int off = hct ? 9 : 3;
    for (int i = 0; i < 3; ++i) {
      g[off + i] = edge_dof_[m.triangle_edge(t, i)];
      if (edge_kind != DofKind::EdgeMidpointValue) s[off + i] = m.edge_sign(t, i);
    }
  }
}

Eigen::VectorXd DofMap::local_coefficients(int t, const Eigen::VectorXd& global) const {
  Eigen::VectorXd c(local_size_);
  const auto g = local_to_global(t);
  const auto s = local_sign(t);
  for (int i = 0; i < local_size_; ++i) c[i] = g[i] < 0 ? 0.0 : s[i] * global[g[i]];
  return c;
}

DiscreteField::DiscreteField(std::shared_ptr<const DofMap> dofmap, Eigen::VectorXd coefficients)
    : dofmap_(std::move(dofmap)), c_(std::move(coefficients)) {
  if (!dofmap_) throw Error("DiscreteField requires a dof map");
  if (c_.size() != dofmap_->size()) throw Error("coefficient length does not match the dof count");
}

DiscreteField::DiscreteField(std::shared_ptr<const DofMap> dofmap)
    : DiscreteField(dofmap, Eigen::VectorXd::Zero(dofmap ? dofmap->size() : 0)) {}

Jet DiscreteField::eval(int t, const Point& x) const {
  const Mesh& m = mesh();
  if (t < 0 || t >= m.num_triangles()) throw Error("triangle id out of range");
  const Eigen::Vector3d lam = m.barycentric(t, x);
  if (lam.minCoeff() < -1e-10) throw Error("evaluation point outside the triangle");
  return dofmap_->shape_set(t).eval_combination(dofmap_->local_coefficients(t, c_), x);
}

Jet eval(const DiscreteField& field, int t, const Point& x) { return field.eval(t, x); }

Jet DifferenceFunction::eval(int t, const Point& x) const {
  Jet a = v_.eval(t, x);
  const Jet b = w_.eval(t, x);
  a.value -= b.value;
  a.grad -= b.grad;
  a.hess -= b.hess;
  return a;
}

ElementRule element_rule(const Mesh& mesh, int t, int degree, bool split) {
  const QuadratureRule& q = quad_triangle(degree);
  const Triangle& tri = mesh.triangle(t);
  const Point a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
  ElementRule r;
  auto add = [&](const Point& p0, const Point& p1, const Point& p2, double area) {
    for (std::size_t k = 0; k < q.size(); ++k) {
      r.x.push_back(p0 + (p1 - p0) * q.points[k].x() + (p2 - p0) * q.points[k].y());
      r.w.push_back(2.0 * area * q.weights[k]);
    }
  };
  if (!split) {
    r.x.reserve(q.size());
    r.w.reserve(q.size());
    add(a, b, c, mesh.area(t));
  } else {
    const Point g = (a + b + c) / 3.0;
    const double third = mesh.area(t) / 3.0;
    r.x.reserve(3 * q.size());
    r.w.reserve(3 * q.size());
    add(b, c, g, third);
    add(c, a, g, third);
    add(a, b, g, third);
  }
  return r;
}

EdgeRule edge_rule(const Mesh& mesh, int e, int degree) {
  const QuadratureRule& q = quad_edge(degree);
  const Edge& E = mesh.edge(e);
  const Point A = mesh.vertex(E.vertices[0]);
  const Point B = mesh.vertex(E.vertices[1]);
  EdgeRule r;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double t = q.points[k].x();
    r.t.push_back(t);
    r.x.push_back(A + t * (B - A));
    r.w.push_back(q.weights[k] * E.length);
  }
  return r;
}

EdgeSamples edge_jumps(const Mesh& mesh, const PiecewiseFunction& v, int e, int degree) {
  const Edge& E = mesh.edge(e);
  EdgeSamples s;
  s.rule = edge_rule(mesh, e, degree);
  const std::size_t n = s.rule.x.size();
  s.plus.resize(n);
  s.minus.resize(n);
  s.value_jump.resize(n);
  s.normal_jump.resize(n);
  s.value_avg.resize(n);
  s.grad_jump.resize(n);
  s.grad_avg.resize(n);
  s.hess_jump.resize(n);
  s.hess_avg.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Jet p = v.eval(E.t_plus, s.rule.x[k]);
    s.plus[k] = p;
    if (E.boundary()) {
      s.value_jump[k] = s.value_avg[k] = p.value;
      s.grad_jump[k] = s.grad_avg[k] = p.grad;
      s.hess_jump[k] = s.hess_avg[k] = p.hess;
    } else {
      const Jet q = v.eval(E.t_minus, s.rule.x[k]);
      s.minus[k] = q;
      s.value_jump[k] = p.value - q.value;
      s.value_avg[k] = 0.5 * (p.value + q.value);
      s.grad_jump[k] = p.grad - q.grad;
      s.grad_avg[k] = 0.5 * (p.grad + q.grad);
      s.hess_jump[k] = p.hess - q.hess;
      s.hess_avg[k] = 0.5 * (p.hess + q.hess);
    }
    s.normal_jump[k] = s.grad_jump[k].dot(E.normal);
  }
  return s;
}

namespace {

// Vertex value jumps at A and B and the mean normal-derivative jump of one edge.
struct EdgeJumpData {
  double za = 0.0, zb = 0.0, mean_normal = 0.0;
};

EdgeJumpData edge_jump_data(const Mesh& mesh, const PiecewiseFunction& v, int e) {
  const Edge& E = mesh.edge(e);
  EdgeJumpData d;
  const Point A = mesh.vertex(E.vertices[0]);
  const Point B = mesh.vertex(E.vertices[1]);
  d.za = v.eval(E.t_plus, A).value;
  d.zb = v.eval(E.t_plus, B).value;
  if (!E.boundary()) {
    d.za -= v.eval(E.t_minus, A).value;
    d.zb -= v.eval(E.t_minus, B).value;
  }
  const EdgeSamples s = edge_jumps(mesh, v, e, 4);
  for (std::size_t k = 0; k < s.rule.w.size(); ++k) d.mean_normal += s.rule.w[k] * s.normal_jump[k];
  d.mean_normal /= E.length;
  return d;
}

}  // namespace

double jh_product(const Mesh& mesh, const PiecewiseFunction& v, const PiecewiseFunction& w) {
  double sum = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const double h = mesh.edge(e).length;
    const EdgeJumpData a = edge_jump_data(mesh, v, e);
    const EdgeJumpData b = edge_jump_data(mesh, w, e);
    sum += (a.za * b.za + a.zb * b.zb) / (h * h) + a.mean_normal * b.mean_normal;
  }
  return sum;
}

std::vector<double> jh_edge_terms(const Mesh& mesh, const PiecewiseFunction& v) {
  std::vector<double> out(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const double h = mesh.edge(e).length;
    const EdgeJumpData a = edge_jump_data(mesh, v, e);
    out[e] = (a.za * a.za + a.zb * a.zb) / (h * h) + a.mean_normal * a.mean_normal;
  }
  return out;
}

double apw_product(const Mesh& mesh, const PiecewiseFunction& v, const PiecewiseFunction& w, int degree) {
  const bool split = v.macro_split() || w.macro_split();
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementRule r = element_rule(mesh, t, degree, split);
    for (std::size_t k = 0; k < r.w.size(); ++k)
      sum += r.w[k] * v.eval(t, r.x[k]).hess.cwiseProduct(w.eval(t, r.x[k]).hess).sum();
  }
  return sum;
}

double energy_distance(const Mesh& mesh, const PiecewiseFunction& v, const PiecewiseFunction& w, int degree) {
  const DifferenceFunction d(v, w);
  return std::sqrt(std::max(0.0, apw_product(mesh, d, d, degree)));
}

double norm_h(const Mesh& mesh, const PiecewiseFunction& v) {
  return std::sqrt(std::max(0.0, apw_product(mesh, v, v, 4) + jh_product(mesh, v, v)));
}

DiscreteField to_dg_p2(const DiscreteField& field) {
  const DofMap& src = field.dofmap();
  if (src.kind() == SpaceKind::HCT) throw Error("HCT fields are not P2 and cannot be re-expressed in dG-P2");
  auto dg = std::make_shared<const DofMap>(src.mesh_ptr(), SpaceKind::DGP2);
  Eigen::VectorXd c(dg->size());
  const Mesh& m = src.mesh();
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Triangle& tri = m.triangle(t);
    for (int i = 0; i < 3; ++i) {
      c[6 * t + i] = field.eval(t, m.vertex(tri[i])).value;
      c[6 * t + 3 + i] = field.eval(t, 0.5 * (m.vertex(tri[(i + 1) % 3]) + m.vertex(tri[(i + 2) % 3]))).value;
    }
  }
  return DiscreteField(dg, std::move(c));
}

}  // namespace plate
