#include "plate/assembly.hpp"
#include "plate/errors.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace plate;
using namespace plate::testing;

namespace {

double contract(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) { return (a.array() * b.array()).sum(); }

// a_h(v, w) written out term by term; v is the trial, w the test function.
double oracle_form(const Mesh& m, const SchemeConfig& c, const DiscreteField& v, const DiscreteField& w) {
  double apw = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementRule r = element_rule(m, t, 4);
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const Eigen::Matrix2d hv = v.eval(t, r.x[q]).hess, hw = w.eval(t, r.x[q]).hess;
      apw += r.w[q] * (c.scheme == Scheme::DG2 ? hv.trace() * hw.trace() : contract(hv, hw));
    }
  }
  double jvw = 0.0, jwv = 0.0, pen = 0.0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const Edge& E = m.edge(e);
    const double h = E.length;
    const EdgeSamples sv = edge_jumps(m, v, e, 6), sw = edge_jumps(m, w, e, 6);
    double mean_v = 0.0, mean_w = 0.0;
    for (std::size_t q = 0; q < sv.rule.w.size(); ++q) {
      const double wq = sv.rule.w[q];
      if (c.scheme == Scheme::DG2) {
        jvw += wq * sv.normal_jump[q] * sw.hess_avg[q].trace();
        jwv += wq * sw.normal_jump[q] * sv.hess_avg[q].trace();
      } else {
        jvw += wq * sv.grad_jump[q].dot(sw.hess_avg[q] * E.normal);
        jwv += wq * sw.grad_jump[q].dot(sv.hess_avg[q] * E.normal);
      }
      switch (c.scheme) {
        case Scheme::DG1:
        case Scheme::DG2:
          pen += wq * (c.sigma1 / (h * h * h) * sv.value_jump[q] * sw.value_jump[q] +
                       c.sigma2 / h * sv.normal_jump[q] * sw.normal_jump[q]);
          break;
        case Scheme::C0IP: pen += wq * c.sigma_ip / h * sv.normal_jump[q] * sw.normal_jump[q]; break;
        default: break;
      }
      mean_v += wq * sv.normal_jump[q] / h;
      mean_w += wq * sw.normal_jump[q] / h;
    }
    if (c.scheme == Scheme::WOPSIP) {
      double vertex = 0.0;
      for (int z : E.vertices) {
        const Point& x = m.vertex(z);
        const double jv = v.eval(E.t_plus, x).value - (E.boundary() ? 0.0 : v.eval(E.t_minus, x).value);
        const double jw = w.eval(E.t_plus, x).value - (E.boundary() ? 0.0 : w.eval(E.t_minus, x).value);
        vertex += jv * jw;
      }
      pen += (vertex / (h * h) + mean_v * mean_w) / (h * h);
    }
  }
  if (c.scheme == Scheme::Morley || c.scheme == Scheme::WOPSIP) return apw + pen;
  return apw - c.theta * jvw - jwv + pen;
}

DofMap dofmap_for(const std::shared_ptr<const Mesh>& m, Scheme s) { return DofMap(m, space_of(s)); }

}  // namespace

TEST(Assembly, MatrixMatchesTermByTermForm) {
  std::mt19937 rng(11);
  const auto m = square(1);
  for (Scheme s : {Scheme::Morley, Scheme::DG1, Scheme::DG2, Scheme::C0IP, Scheme::WOPSIP}) {
    SchemeConfig c;
    c.scheme = s;
    c.theta = 0.3;  // unsymmetric on purpose: exposes swapped arguments
    c.sigma1 = 7.0;
    c.sigma2 = 3.0;
    c.sigma_ip = 5.0;
    auto d = std::make_shared<const DofMap>(m, space_of(s));
    const SparseMatrix A = assemble_matrix(*d, c);
    for (int k = 0; k < 3; ++k) {
      const DiscreteField v(d, random_vector(d->size(), rng)), w(d, random_vector(d->size(), rng));
      const double got = w.coefficients().dot(A * v.coefficients());
      const double want = oracle_form(*m, c, v, w);
      EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, std::abs(want))) << to_string(s);
    }
  }
}

TEST(Assembly, ThetaEntersAffinely) {
  const auto m = square(1);
  for (Scheme s : {Scheme::DG1, Scheme::DG2, Scheme::C0IP}) {
    const DofMap d = dofmap_for(m, s);
    SchemeConfig c;
    c.scheme = s;
    c.theta = -1.0;
    const Eigen::MatrixXd am = Eigen::MatrixXd(assemble_matrix(d, c));
    c.theta = 0.0;
    const Eigen::MatrixXd a0 = Eigen::MatrixXd(assemble_matrix(d, c));
    c.theta = 1.0;
    const Eigen::MatrixXd ap = Eigen::MatrixXd(assemble_matrix(d, c));
    EXPECT_LT((am + ap - 2.0 * a0).norm(), 1e-10 * a0.norm()) << to_string(s);
    EXPECT_LT((ap - ap.transpose()).norm(), 1e-10 * ap.norm()) << to_string(s);
    // Theta = -1: the skew part is twice that of Theta = 0.
    EXPECT_LT(((am - am.transpose()) - 2.0 * (a0 - a0.transpose())).norm(), 1e-10 * a0.norm()) << to_string(s);
  }
}

TEST(Assembly, MorleyMatrixIsPiecewiseHessianGram) {
  const auto m = square(0, 4);
  auto d = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  SchemeConfig c;
  const Eigen::MatrixXd A = Eigen::MatrixXd(assemble_matrix(*d, c));
  ASSERT_EQ(A.rows(), d->size());
  for (int i = 0; i < d->size(); ++i)
    for (int j = 0; j < d->size(); ++j)
      EXPECT_NEAR(A(i, j), apw_product(*m, unit_field(d, j), unit_field(d, i)), 1e-11);
}

TEST(Assembly, StiffnessMatchesQuadratureEnergy) {
  std::mt19937 rng(14);
  const auto m = square(1);
  for (SpaceKind k : {SpaceKind::Morley, SpaceKind::DGP2, SpaceKind::C0IP, SpaceKind::HCT}) {
    const DiscreteField v = random_field(m, k, rng);
    const double e = energy_distance(*m, v, DiscreteField(v.dofmap_ptr()));
    EXPECT_NEAR(v.coefficients().dot(stiffness_pw(v.dofmap()) * v.coefficients()), e * e, 1e-10 * e * e) << to_string(k);
  }
  // mixed Gram between HCT and Morley
  auto hct = std::make_shared<const DofMap>(m, SpaceKind::HCT);
  auto morley = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  const DiscreteField w(hct, random_vector(hct->size(), rng)), v(morley, random_vector(morley->size(), rng));
  const double want = apw_product(*m, v, w);
  EXPECT_NEAR(v.coefficients().dot(mixed_stiffness_pw(*morley, *hct) * w.coefficients()), want,
              1e-10 * std::abs(want));
}

TEST(Assembly, UnitSourceMorleyLoadIsBasisIntegral) {
  const auto m = square(1);
  auto d = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  SourceSpec src;
  src.f0 = [](const Point&) { return 1.0; };
  const Eigen::VectorXd b = assemble_rhs(*d, SchemeConfig{}, src);
  for (int i = 0; i < d->size(); ++i) {
    const DiscreteField phi = unit_field(d, i);
    double want = 0.0;
    for (int t = 0; t < m->num_triangles(); ++t) {
      const ElementRule r = element_rule(*m, t, 4);
      for (std::size_t q = 0; q < r.w.size(); ++q) want += r.w[q] * phi.eval(t, r.x[q]).value;
    }
    EXPECT_NEAR(b[i], want, 1e-13);
  }
  EXPECT_EQ(assemble_rhs(*d, SchemeConfig{}, SourceSpec{}).norm(), 0.0);
}

TEST(Assembly, SmoothedLoadIntegratesAgainstCompanion) {
  const auto m = square(1);
  auto d = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  SourceSpec src;
  src.f0 = [](const Point& x) { return 1.0 + x.x() * x.y(); };
  SchemeConfig c;
  c.smoother = Smoother::Companion;
  const Eigen::VectorXd b = assemble_rhs(*d, c, src);
  for (int i = 0; i < d->size(); ++i) {
    const DiscreteField jphi = companion(unit_field(d, i));
    double want = 0.0;
    for (int t = 0; t < m->num_triangles(); ++t) {
      const ElementRule r = element_rule(*m, t, 7, true);
      for (std::size_t q = 0; q < r.w.size(); ++q) want += r.w[q] * src.f0(r.x[q]) * jphi.eval(t, r.x[q]).value;
    }
    EXPECT_NEAR(b[i], want, 1e-13);
  }
}

TEST(Assembly, CenterPointLoadWithCompanion) {
  // J_h phi evaluated at the interior vertex: 1 for its own vertex dof, 0 otherwise.
  const auto m = mesh_ptr(unit_square_mesh(4));
  auto d = std::make_shared<const DofMap>(m, SpaceKind::Morley);
  SourceSpec src;
  src.points.push_back({Point(0.5, 0.5), 1.0});
  SchemeConfig c;
  c.smoother = Smoother::Companion;
  const Eigen::VectorXd b = assemble_rhs(*d, c, src);
  int centre = -1;
  for (int z = 0; z < m->num_vertices(); ++z)
    if (!m->is_boundary_vertex(z)) centre = z;
  for (int i = 0; i < d->size(); ++i) EXPECT_NEAR(b[i], i == d->vertex_dof(centre) ? 1.0 : 0.0, 1e-14);
}

TEST(Assembly, PenaltyEnergyMatchesOracle) {
  std::mt19937 rng(12);
  const auto m = square(1);
  for (Scheme s : {Scheme::Morley, Scheme::DG1, Scheme::C0IP, Scheme::WOPSIP}) {
    SchemeConfig c;
    c.scheme = s;
    auto d = std::make_shared<const DofMap>(m, space_of(s));
    const DiscreteField v(d, random_vector(d->size(), rng));
    SchemeConfig nopen = c;
    double want = 0.0;
    if (s != Scheme::Morley) {
      // c(v, v) = a_h(v, v) - a_h(v, v) without penalties
      nopen.sigma1 = nopen.sigma2 = nopen.sigma_ip = 0.0;
      want = oracle_form(*m, c, v, v) - (s == Scheme::WOPSIP ? apw_product(*m, v, v) : oracle_form(*m, nopen, v, v));
    }
    EXPECT_NEAR(penalty_energy(v, c), want, 1e-9 * std::max(1.0, want)) << to_string(s);
  }
}

TEST(Assembly, WopsipStabilisationOnTwoTriangles) {
  // v = x on T_plus: the diagonal contributes h^-2 (1/h^2 + 1/2) = 1/2.
  const auto m = mesh_ptr(unit_square_mesh(2));
  const DiscreteField v = first_triangle_field(m, [](const Point& p) { return p.x(); });
  const std::vector<double> jh = jh_edge_terms(*m, v);
  const int e = first_interior_edge(*m);
  EXPECT_NEAR(jh[e] / (m->edge(e).length * m->edge(e).length), 0.5, 1e-13);
  double want = 0.0;
  for (int k = 0; k < m->num_edges(); ++k) want += jh[k] / (m->edge(k).length * m->edge(k).length);
  const SparseMatrix G = jump_gram(v.dofmap(), -2.0);
  EXPECT_NEAR(v.coefficients().dot(G * v.coefficients()), want, 1e-13);
}

TEST(Assembly, NormGramIsBrokenEnergyPlusJumps) {
  std::mt19937 rng(13);
  const auto m = square(1);
  const DiscreteField v = random_field(m, SpaceKind::DGP2, rng);
  const SparseMatrix G = norm_h_gram(v.dofmap());
  const double n = norm_h(*m, v);
  EXPECT_NEAR(v.coefficients().dot(G * v.coefficients()), n * n, 1e-10 * n * n);
}

TEST(Assembly, ConfigValidation) {
  SchemeConfig c;
  c.scheme = Scheme::DG1;
  c.theta = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.theta = 1.0;
  c.sigma1 = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.scheme = Scheme::Morley;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(parse_scheme("WOPSIP"), Scheme::WOPSIP);
  EXPECT_THROW((void)parse_scheme("hho"), ConfigError);
}
