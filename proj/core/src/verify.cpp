#include "plate/verify.hpp"

#include "plate/assembly.hpp"
#include "plate/cr_demo.hpp"
#include "plate/estimate.hpp"
#include "plate/manufactured.hpp"
#include "plate/report.hpp"
#include "plate/solve.hpp"
#include "plate/transfer.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace plate {

double morley_interpolation_ratio(const std::shared_ptr<const Mesh>& mesh, const PiecewiseFunction& v) {
  auto morley = std::make_shared<const DofMap>(mesh, SpaceKind::Morley);
  const DiscreteField iv = interpolate_morley(v, morley, 9);
  const Mesh& m = *mesh;
  double num = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double h2 = m.diameter(t) * m.diameter(t);
    const ElementRule r = element_rule(m, t, 10);
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const double d = v.eval(t, r.x[q]).value - iv.eval(t, r.x[q]).value;
      num += r.w[q] * d * d / (h2 * h2);
    }
  }
  const SmoothFunction zero([](const Point&) { return Jet{}; });
  return std::sqrt(num) / energy_distance(m, v, zero);
}

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::vector<std::shared_ptr<const Mesh>> small_meshes() {
  return {std::make_shared<const Mesh>(refine_uniform(unit_square_mesh(2), 2)),
          std::make_shared<const Mesh>(refine_uniform(unit_square_mesh(4), 1)),
          std::make_shared<const Mesh>(refine_uniform(lshape_mesh(), 1))};
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

std::array<double, 6> random_weights(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<double, 6> c{};
  for (double& v : c) v = u(rng);
  c[0] += 2.0;
  return c;
}

Outcome check_right_inverse(std::mt19937_64& rng) {
  double worst = 0.0;
  for (const auto& mesh : small_meshes()) {
    auto morley = std::make_shared<const DofMap>(mesh, SpaceKind::Morley);
    auto hct = std::make_shared<const DofMap>(mesh, SpaceKind::HCT);
    const SparseMatrix J = companion_matrix(*morley, *hct);
    const SparseMatrix IM = morley_interpolation_matrix(*hct, *morley);
    for (int s = 0; s < 20; ++s) {
      const Eigen::VectorXd v = random_vector(morley->size(), rng);
      const Eigen::VectorXd back = IM * (J * v);
      worst = std::max(worst, (back - v).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12, "max |I_M J v - v| = " + fmt(worst)};
}

Outcome check_morley_jh(std::mt19937_64& rng) {
  double worst = 0.0;
  for (const auto& mesh : small_meshes()) {
    auto morley = std::make_shared<const DofMap>(mesh, SpaceKind::Morley);
    const DiscreteField v(morley, random_vector(morley->size(), rng));
    const double scale = std::max(1.0, v.coefficients().squaredNorm());
    worst = std::max(worst, std::abs(jh_product(*mesh, v, v)) / scale);
  }
  return {worst <= 1e-12, "max j_h(v, v) / |v|^2 = " + fmt(worst)};
}

Outcome check_orthogonality(std::mt19937_64& rng) {
  auto mesh = small_meshes().front();
  auto morley = std::make_shared<const DofMap>(mesh, SpaceKind::Morley);
  auto dg = std::make_shared<const DofMap>(mesh, SpaceKind::DGP2);
  const SmoothFunction zero([](const Point&) { return Jet{}; });
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto v = weighted_bubble(random_weights(rng));
    const DiscreteField iv = interpolate_morley(*v, morley, 9);
    const DifferenceFunction diff(*v, iv);
    const DiscreteField w(dg, random_vector(dg->size(), rng));
    const double num = apw_product(*mesh, diff, w, 8);
    const double den = energy_distance(*mesh, *v, zero) * energy_distance(*mesh, w, zero, 2);
    worst = std::max(worst, std::abs(num) / den);
  }
  return {worst <= 1e-10, "max relative a_pw(v - I_M v, w_2) = " + fmt(worst)};
}

Outcome check_kappa_m(std::mt19937_64& rng) {
  auto mesh = small_meshes().front();
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) worst = std::max(worst, morley_interpolation_ratio(mesh, *weighted_bubble(random_weights(rng))));
  return {worst <= 0.2575, "max ratio = " + fmt(worst)};
}

Outcome check_kappa_cr(std::mt19937_64& rng) {
  const Mesh mesh = refine_uniform(unit_square_mesh(2), 2);
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto v = weighted_bubble(random_weights(rng));
    const GradField g{[v](const Point& x) { return (*v)(x).value; }, [v](const Point& x) { return (*v)(x).grad; }};
    worst = std::max(worst, cr_interpolation_ratio(mesh, g));
  }
  return {worst <= 0.2983, "max ratio = " + fmt(worst)};
}

Outcome check_morley_alpha() {
  double worst = 0.0;
  for (const auto& mesh : small_meshes()) {
    const DofMap morley(mesh, SpaceKind::Morley);
    worst = std::max(worst, std::abs(estimate_ellipticity(morley, SchemeConfig{}).alpha - 1.0));
  }
  return {worst <= 1e-8, "max |alpha - 1| = " + fmt(worst)};
}

Outcome check_penalty_alpha() {
  auto mesh = small_meshes().front();
  double lowest = 1e300;
  for (Scheme s : {Scheme::DG1, Scheme::DG2, Scheme::C0IP, Scheme::WOPSIP}) {
    SchemeConfig cfg;
    cfg.scheme = s;
    const DofMap d(mesh, space_of(s));
    lowest = std::min(lowest, estimate_ellipticity(d, cfg).alpha);
  }
  return {lowest > 0.0, "min alpha = " + fmt(lowest)};
}

Outcome check_symmetry() {
  auto mesh = small_meshes().front();
  double worst = 0.0;
  for (Scheme s : {Scheme::Morley, Scheme::DG1, Scheme::DG2, Scheme::C0IP, Scheme::WOPSIP}) {
    SchemeConfig cfg;
    cfg.scheme = s;
    const DofMap d(mesh, space_of(s));
    const SparseMatrix A = assemble_matrix(d, cfg);
    const SparseMatrix At = A.transpose();
    worst = std::max(worst, (A - At).norm() / A.norm());
  }
  return {worst <= 1e-13, "max ||A - A^T|| / ||A|| = " + fmt(worst)};
}

Outcome check_pythagoras() {
  const Mesh mesh = refine_uniform(unit_square_mesh(2), 2);
  const ScalarField f = [](const Point& p) { return std::exp(p.x()) * std::sin(3.0 * p.y()) + p.x() * p.x() * p.x(); };
  SourceSpec src;
  src.f0 = f;
  const SourceApproximation data = approximate_source(mesh, src, {2, -1, -1, -1, -1});
  const MuTerms mu = general_mu(mesh, data, nullptr, TransferKind::Identity);
  const VolumeOsc vo = volume_and_osc(mesh, f, 2);
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double lhs = mu.mu1.values[t] + vo.osc.values[t];
    worst = std::max(worst, std::abs(lhs - vo.volume.values[t]) / vo.volume.values[t]);
  }
  return {worst <= 1e-12, "max relative defect = " + fmt(worst)};
}

Outcome check_unsmoothed_refusal() {
  const Mesh mesh = refine_uniform(unit_square_mesh(2), 1);
  SourceSpec src;
  src.f1 = [](const Point& p) { return Eigen::Vector2d(p.y(), 1.0); };
  const SourceApproximation data = approximate_source(mesh, src);
  try {
    require_unsmoothed_assumptions(data, UnsmoothedFamily::NonconformingP2);
  } catch (const DataAssumptionError& e) {
    return {e.assumption() == DataAssumption::FirstOrderVanishes, e.what()};
  }
  return {false, "no error raised"};
}

Outcome check_manufactured_boundary() {
  const ManufacturedCase c = manufactured_square();
  double worst = 0.0;
  for (int i = 0; i <= 25; ++i) {
    const double s = i / 25.0;
    for (const Point& p : {Point(s, 0), Point(s, 1), Point(0, s), Point(1, s)}) {
      const Jet j = (*c.u)(p);
      worst = std::max({worst, std::abs(j.value), j.grad.norm()});
    }
  }
  return {worst <= 1e-12, "max |u|, |grad u| on the boundary = " + fmt(worst)};
}

Outcome check_csv_roundtrip() {
  StudyRecord st;
  for (int l = 0; l < 3; ++l) {
    LevelRecord r;
    r.level = l;
    r.ndof = 10 * (l + 1);
    r.hmax = std::pow(0.5, l);
    r.err_pw = l == 1 ? -1.0 : 0.1 / (l + 1);
    r.est_a = 1.0 / 3.0 + l;
    r.est_b = 2.0 / 7.0;
    r.est_theorem = r.est_a;
    r.osc = 1e-9;
    r.apx = 0.0;
    st.levels.push_back(r);
  }
  std::stringstream ss;
  write_study_csv(ss, st);
  const StudyRecord back = read_study_csv(ss);
  bool ok = back.levels.size() == st.levels.size();
  for (std::size_t i = 0; ok && i < st.levels.size(); ++i) {
    const LevelRecord &a = st.levels[i], &b = back.levels[i];
    ok = a.level == b.level && a.ndof == b.ndof && a.hmax == b.hmax && a.est_a == b.est_a && a.est_b == b.est_b &&
         a.osc == b.osc && (a.err_pw < 0 ? b.err_pw < 0 : a.err_pw == b.err_pw);
  }
  return {ok, ok ? "3 rows identical" : "rows differ"};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed, std::ostream* log) {
  std::mt19937_64 rng(seed);
  struct Named {
    const char* name;
    const char* description;
    std::function<Outcome()> run;
  };
  const std::vector<Named> checks = {
      {"morley_right_inverse", "I_M J v must reproduce every Morley coefficient vector",
       [&] { return check_right_inverse(rng); }},
      {"morley_jh_zero", "j_h(v, v) must vanish for Morley fields", [&] { return check_morley_jh(rng); }},
      {"morley_orthogonality", "a_pw(v - I_M v, w_2) must vanish for piecewise P2 w_2",
       [&] { return check_orthogonality(rng); }},
      {"kappa_morley", "||h^-2 (v - I_M v)|| <= 0.2575 |||v|||_pw", [&] { return check_kappa_m(rng); }},
      {"kappa_cr", "||h^-1 (v - I_CR v)|| <= 0.2983 |||v|||", [&] { return check_kappa_cr(rng); }},
      {"morley_alpha", "Morley ellipticity constant must equal 1", check_morley_alpha},
      {"penalty_alpha", "penalty schemes must be elliptic at default penalties", check_penalty_alpha},
      {"symmetry", "discrete forms with theta = 1 must be symmetric", check_symmetry},
      {"pythagoras", "mu_1^2 + osc_2^2 must equal ||h^2 f||^2 elementwise", check_pythagoras},
      {"unsmoothed_refusal", "Q = id must reject first-order source data", check_unsmoothed_refusal},
      {"manufactured_boundary", "manufactured u and grad u must vanish on the boundary", check_manufactured_boundary},
      {"csv_roundtrip", "study CSV must read back unchanged", check_csv_roundtrip},
  };
  if (log) *log << "verify suite, seed " << seed << "\n";
  std::vector<CheckResult> out;
  for (const Named& c : checks) {
    CheckResult r;
    r.name = c.name;
    r.description = c.description;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log) {
      *log << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
      if (!r.passed) *log << "     " << r.description << "\n";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace plate
