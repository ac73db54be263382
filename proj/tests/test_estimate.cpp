#include "plate/errors.hpp"
#include "plate/estimate.hpp"
#include "plate/manufactured.hpp"
#include "plate/solve.hpp"

#include "test_util.hpp"

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include <sstream>

using namespace plate;
using namespace plate::testing;

namespace {

// ||h^2 (f - Pi_2 f)||^2 on one triangle by a dense monomial projection.
double oracle_osc(const Mesh& m, int t, const ScalarField& f) {
  const ElementRule r = element_rule(m, t, 10);
  const Point c = m.centroid(t);
  auto basis = [&](const Point& x) {
    const double a = x.x() - c.x(), b = x.y() - c.y();
    Eigen::Matrix<double, 6, 1> p;
    p << 1, a, b, a * a, a * b, b * b;
    return p;
  };
  Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
  for (std::size_t q = 0; q < r.w.size(); ++q) {
    const auto p = basis(r.x[q]);
    M += r.w[q] * p * p.transpose();
    rhs += r.w[q] * f(r.x[q]) * p;
  }
  const Eigen::Matrix<double, 6, 1> coef = M.ldlt().solve(rhs);
  double s = 0.0;
  for (std::size_t q = 0; q < r.w.size(); ++q) {
    const double d = f(r.x[q]) - coef.dot(basis(r.x[q]));
    s += r.w[q] * d * d;
  }
  return std::pow(m.diameter(t), 4) * s;
}

}  // namespace

TEST(Estimate, TangentialHessianJumpOnTwoTriangles) {
  const auto m = mesh_ptr(unit_square_mesh(2));
  const DiscreteField v = first_triangle_field(m, [](const Point& p) { return p.x() * p.x(); });
  const JumpTerms j = jump_terms(*m, v);
  const int e = first_interior_edge(*m);
  EXPECT_NEAR(j.hessian_tau[e], 4.0, 1e-12);
  EXPECT_NEAR(j.nn[e], 2.0, 1e-12);
}

TEST(Estimate, ValueJumpOnTwoTriangles) {
  const auto m = mesh_ptr(unit_square_mesh(2));
  const DiscreteField v = first_triangle_field(m, [](const Point& p) { return p.x(); });
  const JumpTerms j = jump_terms(*m, v);
  const int e = first_interior_edge(*m);
  EXPECT_NEAR(j.value[e], 1.0 / 6.0, 1e-13);
  EXPECT_NEAR(j.jh[e], 1.0, 1e-13);
  EXPECT_NEAR(j.hessian_tau[e], 0.0, 1e-13);
}

TEST(Estimate, GlobalQuadraticHasNoInteriorJumps) {
  const auto m = square(1);
  auto d = std::make_shared<const DofMap>(m, SpaceKind::DGP2);
  Eigen::VectorXd c(d->size());
  auto q = [](const Point& p) { return 1.0 + p.x() - 2.0 * p.y() + 3.0 * p.x() * p.x() - p.x() * p.y() + 0.5 * p.y() * p.y(); };
  for (int t = 0; t < m->num_triangles(); ++t) {
    const Triangle& tri = m->triangle(t);
    for (int i = 0; i < 3; ++i) {
      c[6 * t + i] = q(m->vertex(tri[i]));
      c[6 * t + 3 + i] = q(0.5 * (m->vertex(tri[(i + 1) % 3]) + m->vertex(tri[(i + 2) % 3])));
    }
  }
  const DiscreteField v(d, c);
  const JumpTerms j = jump_terms(*m, v);
  for (int e = 0; e < m->num_edges(); ++e) {
    if (m->edge(e).boundary()) continue;
    EXPECT_NEAR(j.hessian_tau[e], 0.0, 1e-20);
    EXPECT_NEAR(j.value[e] + j.normal[e] + j.jh[e] + j.nn[e], 0.0, 1e-20);
  }
}

TEST(Estimate, IndicatorTotalsAreSums) {
  std::mt19937 rng(31);
  const auto m = square(1);
  const DiscreteField v = random_field(m, SpaceKind::DGP2, rng);
  const JumpTerms j = jump_terms(*m, v);
  const Indicator a = jump_estimator_A(*m, v), b = jump_estimator_B(*m, v), nn = nn_jump_estimator(*m, v);
  double sa = 0.0, sb = 0.0, snn = 0.0;
  for (int e = 0; e < m->num_edges(); ++e) {
    EXPECT_NEAR(a.values[e], j.hessian_tau[e] + j.jh[e], 1e-12 * (1.0 + a.values[e]));
    EXPECT_NEAR(b.values[e], j.value[e] + j.normal[e], 1e-12 * (1.0 + b.values[e]));
    if (m->edge(e).boundary()) EXPECT_EQ(nn.values[e], 0.0);
    sa += a.values[e];
    sb += b.values[e];
    snn += nn.values[e];
  }
  EXPECT_NEAR(a.total, sa, 1e-12 * sa);
  EXPECT_NEAR(b.total, sb, 1e-12 * sb);
  EXPECT_NEAR(nn.total, snn, 1e-12 * (1.0 + snn));
}

TEST(Estimate, VolumeAndOscillation) {
  const auto ref = mesh_ptr(Mesh({Point(0, 0), Point(1, 0), Point(0, 1)}, {Triangle{0, 1, 2}}));
  const VolumeOsc one = volume_and_osc(*ref, [](const Point&) { return 1.0; });
  EXPECT_NEAR(std::sqrt(one.volume.total), std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(one.osc.total, 0.0, 1e-26);

  const auto m = square(1);
  const ScalarField quad = [](const Point& p) { return p.x() * p.y() - 3.0 * p.y() * p.y(); };
  EXPECT_NEAR(volume_and_osc(*m, quad).osc.total, 0.0, 1e-24);
  const ScalarField cubic = [](const Point& p) { return std::pow(p.x(), 3) + p.x() * p.y() * p.y(); };
  const VolumeOsc vo = volume_and_osc(*m, cubic);
  for (int t = 0; t < m->num_triangles(); ++t) {
    const double want = oracle_osc(*m, t, cubic);
    EXPECT_GT(want, 0.0);
    EXPECT_NEAR(vo.osc.values[t], want, 1e-9 * want);
  }
}

TEST(Estimate, MuOfZeroDataAndHomogeneity) {
  const auto m = square(1);
  const SourceApproximation zero = SourceApproximation::zero(*m);
  EXPECT_EQ(general_mu(*m, zero, nullptr, TransferKind::Identity).total(), 0.0);

  SourceSpec src;
  src.f0 = [](const Point& p) { return 1.0 + p.x(); };
  src.f1 = [](const Point& p) { return Eigen::Vector2d(p.y(), -p.x()); };
  src.f2 = [](const Point& p) { return Eigen::Matrix2d{{p.x(), 0.5}, {0.5, 1.0 - p.y()}}; };
  SourceApproximation data = approximate_source(*m, src);
  const double mu = general_mu(*m, data, nullptr, TransferKind::Identity).total();
  EXPECT_GT(mu, 0.0);
  data.scale(-3.0);
  EXPECT_NEAR(general_mu(*m, data, nullptr, TransferKind::Identity).total(), 9.0 * mu, 1e-10 * mu);
}

TEST(Estimate, ConstantSecondOrderDataHasZeroMu) {
  // F = D^2 : Id is a constant second-order functional; all residual terms vanish.
  const auto m = square(1);
  SourceSpec src;
  src.f2 = [](const Point&) { return Eigen::Matrix2d::Identity().eval(); };
  const SourceApproximation data = approximate_source(*m, src);
  EXPECT_NEAR(general_mu(*m, data, nullptr, TransferKind::Identity).total(), 0.0, 1e-24);
}

TEST(Estimate, FunctionalDualNormOfPiecewiseConstant) {
  std::mt19937 rng(32);
  const auto m = square(1);
  SourceApproximation lam = SourceApproximation::zero(*m);
  const Eigen::VectorXd c = random_vector(m->num_triangles(), rng);
  for (int t = 0; t < m->num_triangles(); ++t) lam.F0[t] = Polynomial::constant(c[t], m->centroid(t), m->diameter(t));
  const MuTerms mu = functional_dualnorm(*m, lam, TransferKind::Identity);
  for (int t = 0; t < m->num_triangles(); ++t)
    EXPECT_NEAR(mu.mu1.values[t], std::pow(m->diameter(t), 4) * c[t] * c[t] * m->area(t), 1e-14);
  EXPECT_EQ(mu.mu2.total, 0.0);
  EXPECT_EQ(mu.mu3.total, 0.0);
}

TEST(Estimate, ApproximationErrorOfPolynomialAndLineData) {
  const auto m = mesh_ptr(unit_square_mesh(2));
  SourceSpec src;
  src.f0 = [](const Point& p) { return p.x() * p.y(); };
  EXPECT_NEAR(apx_error(*m, src, approximate_source(*m, src)).total, 0.0, 1e-26);

  SourceSpec line;
  line.lines.push_back({Point(0, 0), Point(1, 1), 0, [](const Point&) { return 1.0; }});
  ApproximationDegrees deg;
  deg.g0 = -1;
  const Indicator apx = apx_error(*m, line, approximate_source(*m, line, deg));
  const double h = std::sqrt(2.0);
  EXPECT_NEAR(apx.total, 2.0 * std::pow(h, 4), 1e-12);
  EXPECT_NEAR(apx_error(*m, line, approximate_source(*m, line)).total, 0.0, 1e-26);
}

TEST(Estimate, ZeroSolutionOfZeroSourceHasZeroEstimate) {
  const auto m = square(1);
  for (Scheme s : {Scheme::Morley, Scheme::DG1, Scheme::C0IP, Scheme::WOPSIP}) {
    SchemeConfig c;
    c.scheme = s;
    const DiscreteField u(std::make_shared<const DofMap>(m, space_of(s)));
    SourceSpec zero;
    zero.f0 = [](const Point&) { return 0.0; };
    const EstimatorReport r = scheme_estimate(u, c, zero);
    EXPECT_EQ(r.primary(), 0.0) << to_string(s);
    EXPECT_EQ(r.general_a, 0.0) << to_string(s);
  }
}

TEST(Estimate, UnsmoothedRefusals) {
  const auto m = square(1);
  const DiscreteField morley(std::make_shared<const DofMap>(m, SpaceKind::Morley));
  SourceSpec f1;
  f1.f1 = [](const Point&) { return Eigen::Vector2d(1.0, 0.0); };
  try {
    (void)scheme_estimate(morley, SchemeConfig{}, f1);
    FAIL() << "expected a refusal";
  } catch (const DataAssumptionError& e) {
    EXPECT_EQ(e.assumption(), DataAssumption::FirstOrderVanishes);
  }
  SchemeConfig smoothed;
  smoothed.smoother = Smoother::Companion;
  EXPECT_NO_THROW((void)scheme_estimate(morley, smoothed, f1));

  SchemeConfig c0;
  c0.scheme = Scheme::C0IP;
  const DiscreteField c0ip(std::make_shared<const DofMap>(m, SpaceKind::C0IP));
  SourceSpec f2;
  f2.f2 = [](const Point&) { return Eigen::Matrix2d::Identity().eval(); };
  try {
    (void)scheme_estimate(c0ip, c0, f2);
    FAIL() << "expected a refusal";
  } catch (const DataAssumptionError& e) {
    EXPECT_EQ(e.assumption(), DataAssumption::SecondOrderVanishes);
  }
  EXPECT_NO_THROW((void)scheme_estimate(morley, SchemeConfig{}, f2));
}

TEST(Estimate, GeneralBoundCollectsItsParts) {
  const auto m = square(1);
  const ManufacturedCase mc = manufactured_square();
  const Solution sol = solve_problem(m, SchemeConfig{}, mc.source());
  const EstimatorReport r = scheme_estimate(sol.field, SchemeConfig{}, mc.source());
  EXPECT_TRUE(r.l2_source);
  EXPECT_NEAR(r.general_a, r.mu.total() + r.family_a + r.apx.total, 1e-14 * r.general_a);
  EXPECT_NEAR(r.l2_a, r.volume.volume.total + r.family_a, 1e-14 * r.l2_a);
  EXPECT_DOUBLE_EQ(r.primary(), r.l2_a);
  double sum = 0.0;
  for (double v : r.element_indicators(*m)) sum += v;
  EXPECT_NEAR(sum, r.primary(), 1e-12 * r.primary());
}

TEST(Estimate, EnergyErrorOfExactInterpolantVanishesOnlyForExactData) {
  const auto m = square(1);
  const ManufacturedCase mc = manufactured_square();
  const Solution sol = solve_problem(m, SchemeConfig{}, mc.source());
  const EnergyError err = energy_error(*mc.u, sol.field);
  EXPECT_GT(err.pw, 0.0);
  EXPECT_GE(err.h, err.pw);
  EXPECT_NEAR(err.pw, energy_distance(*m, *mc.u, sol.field), 1e-12);
}

TEST(Estimate, CsvLayout) {
  std::ostringstream os;
  write_estimator_csv(os, {{2, "morley", "l2_a", 0.25, 0.5}});
  std::string header, row;
  std::istringstream in(os.str());
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "level,scheme,estimator_name,total,error_energy,efficiency_index");
  EXPECT_EQ(row.substr(0, 13), "2,morley,l2_a");
}
