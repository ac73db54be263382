#include "plate/dualnorm.hpp"

#include "plate/errors.hpp"
#include "plate/transfer.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace plate {

FineSpace make_fine_space(const std::shared_ptr<const Mesh>& coarse, int depth) {
  if (depth < 0 || depth > 3) throw Error("surrogate depth must lie in [0, 3]");
  FineSpace f;
  f.chain.push_back(coarse);
  for (int d = 0; d < depth; ++d) f.chain.push_back(std::make_shared<const Mesh>(refine_uniform(*f.chain.back())));
  std::vector<const Mesh*> raw;
  for (const auto& m : f.chain) raw.push_back(m.get());
  f.ancestor = ancestors(raw);
  f.hct = std::make_shared<const DofMap>(f.chain.back(), SpaceKind::HCT);
  return f;
}

namespace {

Eigen::VectorXd functional_load(const DofMap& hct, const std::vector<int>& ancestor, const SourceApproximation& L) {
  const Mesh& m = hct.mesh();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(hct.size());
  std::vector<Jet> jets;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const int c = ancestor[t];
    const ElementRule r = element_rule(m, t, 8, true);
    const auto g = hct.local_to_global(t);
    const auto s = hct.local_sign(t);
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const Point& x = r.x[q];
      hct.shape_set(t).eval_all(x, jets);
      const double l0 = L.F0[c].value(x);
      const Eigen::Vector2d l1(L.F1[c][0].value(x), L.F1[c][1].value(x));
      const double a = L.F2[c][0].value(x), bxy = L.F2[c][1].value(x), d = L.F2[c][2].value(x);
      for (int j = 0; j < hct.local_size(); ++j) {
        if (g[j] < 0) continue;
        const Jet& J = jets[j];
        const double v = l0 * J.value + l1.dot(J.grad) + a * J.hess(0, 0) + 2.0 * bxy * J.hess(0, 1) + d * J.hess(1, 1);
        b[g[j]] += r.w[q] * s[j] * v;
      }
    }
  }
  return b;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const double L = d.norm();
  const double cross = d.x() * (p - a).y() - d.y() * (p - a).x();
  const double s = (p - a).dot(d) / L;
  return std::abs(cross) <= 1e-10 * L * L && s >= -1e-10 * L && s <= L * (1 + 1e-10);
}

// I_M from the fine HCT space to Morley on the coarse mesh.
SparseMatrix fine_to_coarse_morley(const FineSpace& f, const DofMap& morley) {
  const Mesh& coarse = morley.mesh();
  const Mesh& fine = f.hct->mesh();
  std::vector<Eigen::Triplet<double>> trip;
  for (int v = 0; v < coarse.num_vertices(); ++v) {
    const int r = morley.vertex_dof(v);
    if (r >= 0) trip.emplace_back(r, f.hct->vertex_dof(v), 1.0);
  }
  std::vector<Jet> jets;
  for (int fe = 0; fe < fine.num_edges(); ++fe) {
    const Edge& F = fine.edge(fe);
    if (F.boundary()) continue;
    const int tc = f.ancestor[F.t_plus];
    int ce = -1;
    for (int i = 0; i < 3; ++i) {
      const Edge& C = coarse.edge(coarse.triangle_edge(tc, i));
      const Point a = coarse.vertex(C.vertices[0]), b = coarse.vertex(C.vertices[1]);
      if (on_segment(fine.vertex(F.vertices[0]), a, b) && on_segment(fine.vertex(F.vertices[1]), a, b)) {
        ce = coarse.triangle_edge(tc, i);
        break;
      }
    }
    if (ce < 0) continue;
    const int r = morley.edge_dof(ce);
    if (r < 0) continue;
    const Edge& C = coarse.edge(ce);
    const EdgeRule rule = edge_rule(fine, fe, 4);
    const int piece = fine.local_edge_index(F.t_plus, fe);
    const auto g = f.hct->local_to_global(F.t_plus);
    const auto s = f.hct->local_sign(F.t_plus);
    for (std::size_t q = 0; q < rule.w.size(); ++q) {
      f.hct->shape_set(F.t_plus).eval_all(rule.x[q], jets, piece);
      for (int j = 0; j < f.hct->local_size(); ++j)
        if (g[j] >= 0) trip.emplace_back(r, g[j], rule.w[q] * s[j] * jets[j].grad.dot(C.normal) / C.length);
    }
  }
  SparseMatrix P(morley.size(), f.hct->size());
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

}  // namespace

double surrogate_dual_norm(const std::shared_ptr<const Mesh>& coarse, const SourceApproximation& lambda, int depth,
                           std::optional<TransferKind> complement) {
  const FineSpace f = make_fine_space(coarse, depth);
  Eigen::VectorXd r = functional_load(*f.hct, f.ancestor, lambda);
  if (complement) {
    const DofMap morley(coarse, SpaceKind::Morley);
    const DofMap hct_c(coarse, SpaceKind::HCT);
    std::vector<int> identity(coarse->num_triangles());
    for (int t = 0; t < coarse->num_triangles(); ++t) identity[t] = t;
    const Eigen::VectorXd bc = functional_load(hct_c, identity, lambda);
    SparseMatrix R = companion_matrix(morley, hct_c) * fine_to_coarse_morley(f, morley);
    if (*complement == TransferKind::C0) {
      const DofMap c0(coarse, SpaceKind::C0IP);
      R = smoother_matrix(c0, hct_c) * c0_transfer_matrix(morley, c0) * fine_to_coarse_morley(f, morley);
    }
    r -= R.transpose() * bc;
  }
  if (r.size() == 0 || r.isZero(0.0)) return 0.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> K(Eigen::SparseMatrix<double>(stiffness_pw(*f.hct)));
  if (K.info() != Eigen::Success) throw NumericalError("surrogate_dual_norm: HCT stiffness factorization failed");
  const Eigen::VectorXd x = K.solve(r);
  return std::sqrt(std::max(0.0, r.dot(x)));
}

}  // namespace plate
