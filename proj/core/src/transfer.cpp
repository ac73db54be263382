#include "plate/transfer.hpp"

#include "plate/errors.hpp"

#include <cmath>

namespace plate {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void require_same_mesh(const DofMap& a, const DofMap& b) {
  if (&a.mesh() != &b.mesh()) throw Error("dof maps live on different meshes");
}

void require_kind(const DofMap& d, SpaceKind k, const char* what) {
  if (d.kind() != k) throw Error(std::string(what) + " expects a " + to_string(k) + " dof map, got " + to_string(d.kind()));
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& trip) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(trip.begin(), trip.end());
  a.prune(0.0);
  return a;
}

// Patch-averaged gradient of a Morley field at interior vertex v as rows
// (global Morley dof, coefficient of d/dx, coefficient of d/dy).
struct GradRow {
  int dof;
  double gx, gy;
};

std::vector<GradRow> averaged_gradient(const DofMap& morley, int v) {
  const Mesh& m = morley.mesh();
  const auto patch = m.vertex_patch(v);
  const double w = 1.0 / static_cast<double>(patch.size());
  std::vector<GradRow> rows;
  for (int t : patch) {
    const Point& z = m.vertex(v);
    const auto g = morley.local_to_global(t);
    const auto s = morley.local_sign(t);
    for (int j = 0; j < morley.local_size(); ++j) {
      if (g[j] < 0) continue;
      const Eigen::Vector2d grad = s[j] * morley.shape_set(t).eval(j, z).grad;
      rows.push_back({g[j], w * grad.x(), w * grad.y()});
    }
  }
  return rows;
}

}  // namespace

SparseMatrix morley_interpolation_matrix(const DofMap& from, const DofMap& morley) {
  require_same_mesh(from, morley);
  require_kind(morley, SpaceKind::Morley, "morley_interpolation_matrix");
  const Mesh& m = morley.mesh();
  Triplets trip;
  for (int v = 0; v < m.num_vertices(); ++v) {
    const int r = morley.vertex_dof(v);
    if (r < 0) continue;
    const auto patch = m.vertex_patch(v);
    const double w = 1.0 / static_cast<double>(patch.size());
    for (int t : patch) {
      const auto g = from.local_to_global(t);
      const auto s = from.local_sign(t);
      for (int j = 0; j < from.local_size(); ++j)
        if (g[j] >= 0) trip.emplace_back(r, g[j], w * s[j] * from.shape_set(t).eval(j, m.vertex(v)).value);
    }
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    const int r = morley.edge_dof(e);
    if (r < 0) continue;
    const Edge& E = m.edge(e);
    const EdgeRule rule = edge_rule(m, e, 4);
    for (int t : {E.t_plus, E.t_minus}) {
      const auto g = from.local_to_global(t);
      const auto s = from.local_sign(t);
      for (int j = 0; j < from.local_size(); ++j) {
        if (g[j] < 0) continue;
        double sum = 0.0;
        for (std::size_t k = 0; k < rule.x.size(); ++k)
          sum += rule.w[k] * from.shape_set(t).eval(j, rule.x[k]).grad.dot(E.normal);
        trip.emplace_back(r, g[j], 0.5 * s[j] * sum / E.length);
      }
    }
  }
  return from_triplets(morley.size(), from.size(), trip);
}

DiscreteField interpolate_morley(const DiscreteField& v, std::shared_ptr<const DofMap> morley) {
  if (!morley) morley = std::make_shared<const DofMap>(v.dofmap().mesh_ptr(), SpaceKind::Morley);
  if (v.dofmap().kind() == SpaceKind::Morley && &v.mesh() == &morley->mesh())
    return DiscreteField(morley, v.coefficients());
  const SparseMatrix P = morley_interpolation_matrix(v.dofmap(), *morley);
  return DiscreteField(morley, P * v.coefficients());
}

DiscreteField interpolate_morley(const PiecewiseFunction& v, std::shared_ptr<const DofMap> morley, int edge_degree) {
  if (!morley) throw Error("interpolate_morley needs a target Morley dof map for non-discrete input");
  require_kind(*morley, SpaceKind::Morley, "interpolate_morley");
  const Mesh& m = morley->mesh();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(morley->size());
  for (int z = 0; z < m.num_vertices(); ++z) {
    const int r = morley->vertex_dof(z);
    if (r < 0) continue;
    const auto patch = m.vertex_patch(z);
    double sum = 0.0;
    for (int t : patch) sum += v.eval(t, m.vertex(z)).value;
    c[r] = sum / static_cast<double>(patch.size());
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    const int r = morley->edge_dof(e);
    if (r < 0) continue;
    const Edge& E = m.edge(e);
    const EdgeRule rule = edge_rule(m, e, edge_degree);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double a = v.eval(E.t_plus, rule.x[k]).grad.dot(E.normal);
      const double b = v.eval(E.t_minus, rule.x[k]).grad.dot(E.normal);
      sum += rule.w[k] * 0.5 * (a + b);
    }
    c[r] = sum / E.length;
  }
  return DiscreteField(morley, std::move(c));
}

SparseMatrix c0_transfer_matrix(const DofMap& morley, const DofMap& c0) {
  require_same_mesh(morley, c0);
  require_kind(morley, SpaceKind::Morley, "c0_transfer_matrix");
  require_kind(c0, SpaceKind::C0IP, "c0_transfer_matrix");
  const Mesh& m = morley.mesh();
  Triplets trip;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (c0.vertex_dof(v) >= 0) trip.emplace_back(c0.vertex_dof(v), morley.vertex_dof(v), 1.0);
  for (int e = 0; e < m.num_edges(); ++e) {
    const int r = c0.edge_dof(e);
    if (r < 0) continue;
    const Edge& E = m.edge(e);
    for (int t : {E.t_plus, E.t_minus}) {
      const auto g = morley.local_to_global(t);
      const auto s = morley.local_sign(t);
      for (int j = 0; j < 6; ++j)
        if (g[j] >= 0) trip.emplace_back(r, g[j], 0.5 * s[j] * morley.shape_set(t).eval(j, E.midpoint).value);
    }
  }
  return from_triplets(c0.size(), morley.size(), trip);
}

DiscreteField transfer_c0(const DiscreteField& v_morley, std::shared_ptr<const DofMap> c0) {
  if (!c0) c0 = std::make_shared<const DofMap>(v_morley.dofmap().mesh_ptr(), SpaceKind::C0IP);
  return DiscreteField(c0, c0_transfer_matrix(v_morley.dofmap(), *c0) * v_morley.coefficients());
}

SparseMatrix companion_matrix(const DofMap& morley, const DofMap& hct) {
  require_same_mesh(morley, hct);
  require_kind(morley, SpaceKind::Morley, "companion_matrix");
  require_kind(hct, SpaceKind::HCT, "companion_matrix");
  const Mesh& m = morley.mesh();
  Triplets trip;
  std::vector<std::vector<GradRow>> grad(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) {
    const int r = hct.vertex_dof(v);
    if (r < 0) continue;
    trip.emplace_back(r, morley.vertex_dof(v), 1.0);
    grad[v] = averaged_gradient(morley, v);
    for (const GradRow& g : grad[v]) {
      trip.emplace_back(r + 1, g.dof, g.gx);
      trip.emplace_back(r + 2, g.dof, g.gy);
    }
  }
  // Simpson on the quadratic normal-derivative trace:
  // mean = (d(A) + 4 d(mid) + d(B)) / 6.
  for (int e = 0; e < m.num_edges(); ++e) {
    const int r = hct.edge_dof(e);
    if (r < 0) continue;
    const Edge& E = m.edge(e);
    trip.emplace_back(r, morley.edge_dof(e), 1.5);
    for (int v : E.vertices)
      for (const GradRow& g : grad[v]) trip.emplace_back(r, g.dof, -0.25 * (g.gx * E.normal.x() + g.gy * E.normal.y()));
  }
  return from_triplets(hct.size(), morley.size(), trip);
}

DiscreteField companion(const DiscreteField& v_morley, std::shared_ptr<const DofMap> hct) {
  if (!hct) hct = std::make_shared<const DofMap>(v_morley.dofmap().mesh_ptr(), SpaceKind::HCT);
  return DiscreteField(hct, companion_matrix(v_morley.dofmap(), *hct) * v_morley.coefficients());
}

SparseMatrix smoother_matrix(const DofMap& from, const DofMap& hct) {
  require_same_mesh(from, hct);
  const DofMap morley(from.mesh_ptr(), SpaceKind::Morley);
  const SparseMatrix C = companion_matrix(morley, hct);
  if (from.kind() == SpaceKind::Morley) return C;
  SparseMatrix S = C * morley_interpolation_matrix(from, morley);
  S.prune(0.0);
  return S;
}

DiscreteField smoother(const DiscreteField& v, std::shared_ptr<const DofMap> hct) {
  if (!hct) hct = std::make_shared<const DofMap>(v.dofmap().mesh_ptr(), SpaceKind::HCT);
  return DiscreteField(hct, smoother_matrix(v.dofmap(), *hct) * v.coefficients());
}

OperatorReport operator_report(const DiscreteField& input, const DiscreteField& output, std::vector<std::string> chain) {
  OperatorReport r{input.dofmap().kind(), output.dofmap().kind(), std::move(chain)};
  const DifferenceFunction d(input, output);
  r.distance_pw = std::sqrt(std::max(0.0, apw_product(input.mesh(), d, d, 4)));
  r.distance_h = norm_h(input.mesh(), d);
  return r;
}

}  // namespace plate
