#include "plate/manufactured.hpp"
#include "plate/transfer.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace plate;
using namespace plate::testing;

namespace {

// Mean of grad v . normal over edge e, evaluated from triangle t.
double mean_normal(const Mesh& m, const PiecewiseFunction& v, int e, int t) {
  const EdgeRule r = edge_rule(m, e, 8);
  double s = 0.0;
  for (std::size_t q = 0; q < r.w.size(); ++q) s += r.w[q] * v.eval(t, r.x[q]).grad.dot(m.edge(e).normal);
  return s / m.edge(e).length;
}

double value_at_vertex(const Mesh& m, const PiecewiseFunction& v, int z, int t) { return v.eval(t, m.vertex(z)).value; }

}  // namespace

TEST(Transfer, MorleyInterpolationIsAProjection) {
  std::mt19937 rng(1);
  const auto m = square(2);
  const DiscreteField v = random_field(m, SpaceKind::Morley, rng);
  const DiscreteField iv = interpolate_morley(v);
  EXPECT_LT((iv.coefficients() - v.coefficients()).norm(), 1e-12 * v.coefficients().norm());
}

TEST(Transfer, MorleyInterpolationOfZero) {
  const auto m = square(1);
  const DiscreteField z(std::make_shared<const DofMap>(m, SpaceKind::DGP2));
  EXPECT_EQ(interpolate_morley(z).coefficients().norm(), 0.0);
}

TEST(Transfer, MorleyHessianIsElementMeanOfHessian) {
  const auto m = square(1);
  const auto u = weighted_bubble({1.0, -0.5, 2.0, 0.3, 1.1, -0.7});
  auto morley = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  const DiscreteField iu = interpolate_morley(*u, morley, 9);
  for (int t = 0; t < m->num_triangles(); ++t) {
    const ElementRule r = element_rule(*m, t, 10);
    Eigen::Matrix2d mean = Eigen::Matrix2d::Zero();
    for (std::size_t q = 0; q < r.w.size(); ++q) mean += r.w[q] * (*u)(r.x[q]).hess;
    mean /= m->area(t);
    const Eigen::Matrix2d h = iu.eval(t, m->centroid(t)).hess;
    EXPECT_LT((h - mean).norm(), 1e-10 * std::max(1.0, mean.norm())) << "triangle " << t;
  }
}

TEST(Transfer, MatrixAgreesWithFieldInterpolation) {
  std::mt19937 rng(2);
  const auto m = square(1);
  for (SpaceKind k : {SpaceKind::DGP2, SpaceKind::C0IP, SpaceKind::HCT}) {
    const DiscreteField v = random_field(m, k, rng);
    auto morley = std::make_shared<const DofMap>(m, SpaceKind::Morley);
    const Eigen::VectorXd a = morley_interpolation_matrix(v.dofmap(), *morley) * v.coefficients();
    const Eigen::VectorXd b = interpolate_morley(static_cast<const PiecewiseFunction&>(v), morley, 8).coefficients();
    EXPECT_LT((a - b).norm(), 1e-11 * b.norm()) << to_string(k);
  }
}

TEST(Transfer, MorleyBestApproximationInPiecewiseP2) {
  // |||v - I_M v|||_pw <= |||v - w|||_pw for every piecewise quadratic w
  std::mt19937 rng(3);
  const auto m = square(1);
  const auto v = weighted_bubble({1.0, 0.2, -0.4, 0.9, 0.0, 0.5});
  auto morley = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  const DiscreteField iv = to_dg_p2(interpolate_morley(*v, morley, 9));
  const double best = energy_distance(*m, *v, iv);
  for (int k = 0; k < 50; ++k) {
    DiscreteField w = iv;
    w.coefficients() += 0.1 * random_vector(w.dofmap().size(), rng);
    EXPECT_LE(best, energy_distance(*m, *v, w) + 1e-12);
  }
}

TEST(Transfer, C0TransferCopiesVerticesAndAveragesMidpoints) {
  std::mt19937 rng(4);
  const auto m = square(1);
  const DiscreteField v = random_field(m, SpaceKind::Morley, rng);
  const DiscreteField ic = transfer_c0(v);
  for (int e = 0; e < m->num_edges(); ++e) {
    const Edge& E = m->edge(e);
    const double got = ic.eval(E.t_plus, E.midpoint).value;
    const double want = E.boundary() ? 0.0
                                     : 0.5 * (v.eval(E.t_plus, E.midpoint).value + v.eval(E.t_minus, E.midpoint).value);
    EXPECT_NEAR(got, want, 1e-12);
    for (int z : E.vertices) EXPECT_NEAR(value_at_vertex(*m, ic, z, E.t_plus), value_at_vertex(*m, v, z, E.t_plus), 1e-12);
  }
}

TEST(Transfer, C0TransferOfZeroAndOfAVertexBasisFunction) {
  const auto m = square(1);
  auto morley = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  EXPECT_EQ(transfer_c0(DiscreteField(morley)).coefficients().norm(), 0.0);
  int z = 0;
  while (m->is_boundary_vertex(z)) ++z;
  const DiscreteField ic = transfer_c0(unit_field(morley, morley->vertex_dof(z)));
  for (int y = 0; y < m->num_vertices(); ++y) {
    const int t = m->vertex_patch(y)[0];
    EXPECT_NEAR(value_at_vertex(*m, ic, y, t), y == z ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Transfer, CompanionPreservesMorleyDegreesOfFreedom) {
  std::mt19937 rng(5);
  for (int r : {0, 1, 2}) {
    const auto m = square(r);
    const DiscreteField v = random_field(m, SpaceKind::Morley, rng);
    const DiscreteField jv = companion(v);
    EXPECT_LT((interpolate_morley(jv).coefficients() - v.coefficients()).norm(), 1e-11 * v.coefficients().norm());
    for (int e = 0; e < m->num_edges(); ++e) {
      const Edge& E = m->edge(e);
      EXPECT_NEAR(mean_normal(*m, jv, e, E.t_plus), mean_normal(*m, v, e, E.t_plus), 1e-11);
      for (int z : E.vertices) EXPECT_NEAR(value_at_vertex(*m, jv, z, E.t_plus), value_at_vertex(*m, v, z, E.t_plus), 1e-12);
    }
  }
}

TEST(Transfer, CompanionOfEdgeBasisFunction) {
  const auto m = square(1);
  auto morley = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  const int e0 = first_interior_edge(*m);
  const DiscreteField jv = companion(unit_field(morley, morley->edge_dof(e0)));
  for (int e = 0; e < m->num_edges(); ++e) {
    const Edge& E = m->edge(e);
    EXPECT_NEAR(mean_normal(*m, jv, e, E.t_plus), e == e0 ? 1.0 : 0.0, 1e-12);
    if (!E.boundary()) EXPECT_NEAR(mean_normal(*m, jv, e, E.t_minus), e == e0 ? 1.0 : 0.0, 1e-12);
  }
  for (int z = 0; z < m->num_vertices(); ++z) EXPECT_NEAR(value_at_vertex(*m, jv, z, m->vertex_patch(z)[0]), 0.0, 1e-13);
  EXPECT_EQ(companion(DiscreteField(morley)).coefficients().norm(), 0.0);
}

TEST(Transfer, CompanionIsConforming) {
  // J v is C^1: traces and gradients agree across every interior edge.
  std::mt19937 rng(6);
  const auto m = square(1);
  const DiscreteField jv = companion(random_field(m, SpaceKind::Morley, rng));
  for (int e = 0; e < m->num_edges(); ++e) {
    const EdgeSamples s = edge_jumps(*m, jv, e, 6);
    for (std::size_t q = 0; q < s.rule.w.size(); ++q) {
      if (m->edge(e).boundary()) {
        EXPECT_NEAR(s.plus[q].value, 0.0, 1e-12);
        EXPECT_LT(s.plus[q].grad.norm(), 1e-12);
      } else {
        EXPECT_NEAR(s.value_jump[q], 0.0, 1e-12);
        EXPECT_LT(s.grad_jump[q].norm(), 1e-12);
      }
    }
  }
}

TEST(Transfer, SmootherIsCompanionAfterInterpolation) {
  std::mt19937 rng(7);
  const auto m = square(1);
  for (SpaceKind k : {SpaceKind::Morley, SpaceKind::DGP2, SpaceKind::C0IP}) {
    const DiscreteField v = random_field(m, k, rng);
    const DiscreteField a = smoother(v);
    const DiscreteField b = companion(interpolate_morley(v));
    EXPECT_LT((a.coefficients() - b.coefficients()).norm(), 1e-12 * b.coefficients().norm()) << to_string(k);
  }
}

TEST(Transfer, OperatorReportDistances) {
  std::mt19937 rng(8);
  const auto m = square(1);
  const DiscreteField v = random_field(m, SpaceKind::Morley, rng);
  const DiscreteField jv = companion(v);
  const OperatorReport r = operator_report(v, jv, {"J"});
  EXPECT_EQ(r.input, SpaceKind::Morley);
  EXPECT_EQ(r.output, SpaceKind::HCT);
  ASSERT_EQ(r.chain.size(), 1u);
  EXPECT_NEAR(r.distance_pw, energy_distance(*m, v, jv), 1e-12 * r.distance_pw);
  EXPECT_GE(r.distance_h, r.distance_pw);
  const OperatorReport same = operator_report(v, v, {});
  EXPECT_NEAR(same.distance_h, 0.0, 1e-14);
}
