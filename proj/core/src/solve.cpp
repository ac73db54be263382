#include "plate/solve.hpp"

#include "plate/errors.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace plate {

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

Eigen::VectorXd residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b, long double& norm) {
  Eigen::VectorXd r(A.rows());
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
    long double ri = b[i];
    for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      ri -= static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]);
    r[i] = static_cast<double>(ri);
    sum += ri * ri;
  }
  norm = std::sqrt(sum);
  return r;
}

// max_i |r_i| / (|A| |x| + |b|)_i
double backward_error(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& r) {
  long double worst = 0.0L;
  for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
    long double den = std::abs(static_cast<long double>(b[i]));
    for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      den += std::abs(static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]));
    if (den > 0.0L) worst = std::max(worst, std::abs(static_cast<long double>(r[i])) / den);
  }
  return static_cast<double>(worst);
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

long double norm_ld(const Eigen::VectorXd& b) {
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < b.size(); ++i) s += static_cast<long double>(b[i]) * b[i];
  return std::sqrt(s);
}

}  // namespace

SolveResult solve_linear(const LinearSystem& sys, double tolerance) {
  const SparseMatrix& A = sys.matrix;
  if (A.rows() != A.cols() || A.rows() != sys.rhs.size()) throw NumericalError("solve_linear: dimension mismatch");
  SolveResult out;
  const Eigen::Index n = A.rows();
  if (n == 0) return out;

  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(A.coeff(i, i));
    scale[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  const ColMatrix scaled = scale.asDiagonal() * ColMatrix(A) * scale.asDiagonal();

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  Eigen::SimplicialLDLT<ColMatrix> ldlt;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  if (sys.symmetric) {
    out.method = "ldlt";
    ldlt.compute(scaled);
    if (ldlt.info() != Eigen::Success) throw NumericalError("LDL^T factorization failed");
    const Eigen::VectorXd D = ldlt.vectorD();
    out.min_pivot = D.cwiseAbs().minCoeff();
    if (!(out.min_pivot > 1e-14 * D.cwiseAbs().maxCoeff()))
      throw NumericalError("singular matrix: smallest LDL^T pivot " + std::to_string(out.min_pivot));
    apply = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd { return ldlt.solve(r); };
  } else {
    out.method = "lu";
    lu.analyzePattern(scaled);
    lu.factorize(scaled);
    if (lu.info() != Eigen::Success) throw NumericalError("LU factorization failed: " + lu.lastErrorMessage());
    out.min_pivot = std::numeric_limits<double>::quiet_NaN();
    apply = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd { return lu.solve(r); };
  }

  const long double bnorm = norm_ld(sys.rhs);
  out.x = scale.cwiseProduct(apply(scale.cwiseProduct(sys.rhs)));
  if (bnorm == 0.0L) {
    out.x.setZero();
    return out;
  }
  long double rnorm = 0.0L;
  Eigen::VectorXd r = residual(A, out.x, sys.rhs, rnorm);
  for (int step = 0; step < 6 && rnorm > 1e-3L * tolerance * bnorm; ++step) {
    out.x += scale.cwiseProduct(apply(scale.cwiseProduct(r)));
    const long double previous = rnorm;
    r = residual(A, out.x, sys.rhs, rnorm);
    ++out.refinement_steps;
    if (rnorm > 0.5L * previous) break;
  }
  out.relative_residual = static_cast<double>(rnorm / bnorm);
  out.backward_error = backward_error(A, out.x, sys.rhs, r);
  out.rounding_limited = !(out.relative_residual <= tolerance);
  if (out.rounding_limited && !(out.backward_error <= 4.0 * std::numeric_limits<double>::epsilon()))
    throw NumericalError("relative residual " + sci(out.relative_residual) + " exceeds " + sci(tolerance) +
                         " with backward error " + sci(out.backward_error) + " (" + out.method +
                         ", n = " + std::to_string(n) + ")");
  return out;
}

namespace {

// Number of eigenvalues of (A, G) below sigma; -1 if the factorization breaks down.
int inertia_below(const ColMatrix& A, const ColMatrix& G, double sigma) {
  Eigen::SimplicialLDLT<ColMatrix> f(ColMatrix(A - sigma * G));
  if (f.info() != Eigen::Success) return -1;
  const Eigen::VectorXd D = f.vectorD();
  int neg = 0;
  for (Eigen::Index i = 0; i < D.size(); ++i)
    if (D[i] < 0.0) ++neg;
  return neg;
}

}  // namespace

EllipticityEstimate estimate_ellipticity(const DofMap& d, const SchemeConfig& cfg, double rel_tol) {
  EllipticityEstimate est;
  const ColMatrix A0(assemble_matrix(d, cfg));
  const ColMatrix At = A0.transpose();
  const ColMatrix A = 0.5 * (A0 + At);
  const ColMatrix G(norm_h_gram(d));
  if (A.rows() == 0) throw NumericalError("estimate_ellipticity: empty space");

  auto count = [&](double s) {
    ++est.factorizations;
    int c = inertia_below(A, G, s);
    // A zero pivot means sigma hit an eigenvalue; nudge once.
    if (c < 0) {
      ++est.factorizations;
      c = inertia_below(A, G, s - 1e-12 * std::max(1.0, std::abs(s)));
    }
    if (c < 0) throw NumericalError("estimate_ellipticity: factorization breakdown");
    return c;
  };

  double lo = 0.0;
  if (count(lo) > 0) {
    lo = -1.0;
    int tries = 0;
    while (count(lo) > 0) {
      lo *= 4.0;
      if (++tries > 40) throw NumericalError("estimate_ellipticity: no lower bracket");
    }
  }

  // Inverse iteration with shift lo gives a Rayleigh quotient above lambda_min.
  Eigen::SimplicialLDLT<ColMatrix> f(ColMatrix(A - lo * G));
  ++est.factorizations;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(A.rows());
  double rho = 0.0;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd y = f.solve(G * x);
    if (f.info() != Eigen::Success || !y.allFinite()) break;
    const double gy = y.dot(G * y);
    y /= std::sqrt(gy);
    const double next = y.dot(A * y);
    x = y;
    if (it > 0 && std::abs(next - rho) <= 1e-13 * std::max(1.0, std::abs(next))) {
      rho = next;
      break;
    }
    rho = next;
  }
  const double mag = std::max(1.0, std::abs(rho));
  double hi = rho + 1e-9 * mag;
  while (count(hi) == 0) hi += std::max(1e-6 * mag, hi - lo);
  for (double delta : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double cand = rho - delta * mag;
    if (cand > lo && count(cand) == 0) lo = cand;
  }
  while (hi - lo > rel_tol * std::max({1.0, std::abs(lo), std::abs(hi)})) {
    const double mid = 0.5 * (lo + hi);
    (count(mid) == 0 ? lo : hi) = mid;
  }
  est.alpha = 0.5 * (lo + hi);
  return est;
}

HQuotient::HQuotient(const DofMap& d, const SchemeConfig& cfg) {
  const DofMap hct(d.mesh_ptr(), SpaceKind::HCT);
  A_ = assemble_matrix(d, cfg);
  G_ = norm_h_gram(d);
  K_ = stiffness_pw(hct);
  M_ = mixed_stiffness_pw(d, hct);
  S_ = smoother_matrix(d, hct);
  g_solver_.compute(Eigen::SparseMatrix<double>(G_));
  if (g_solver_.info() != Eigen::Success) throw NumericalError("HQuotient: ||.||_h Gram factorization failed");
}

double HQuotient::distance(const Eigen::VectorXd& w) const {
  const Eigen::VectorXd sw = S_ * w;
  const double d2 = w.dot(G_ * w) - 2.0 * w.dot(M_ * sw) + sw.dot(K_ * sw);
  return std::sqrt(std::max(0.0, d2));
}

std::optional<double> HQuotient::operator()(const Eigen::VectorXd& w) const {
  const double dist = distance(w);
  const double norm = std::sqrt(std::max(0.0, w.dot(G_ * w)));
  if (!(dist > 1e-14 * std::max(norm, 1e-300))) return std::nullopt;
  const Eigen::VectorXd sw = S_ * w;
  const Eigen::VectorXd r = A_ * w - S_.transpose() * (K_ * sw);
  const Eigen::VectorXd z = g_solver_.solve(r);
  return std::sqrt(std::max(0.0, r.dot(z))) / dist;
}

HConstantEstimate estimate_H_constant(const DofMap& d, const SchemeConfig& cfg, int samples, std::uint64_t seed) {
  HConstantEstimate est;
  est.seed = seed;
  const HQuotient q(d, cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd w(d.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = u(rng);
    if (const auto v = q(w)) {
      est.lambda = std::max(est.lambda, *v);
      ++est.used;
    } else {
      ++est.skipped;
    }
  }
  return est;
}

Solution solve_problem(const std::shared_ptr<const Mesh>& mesh, const SchemeConfig& cfg, const SourceSpec& source) {
  auto d = std::make_shared<const DofMap>(mesh, space_of(cfg.scheme));
  SolveResult info = solve_linear(assemble(*d, cfg, source));
  DiscreteField u(d, info.x);
  return {d, std::move(u), std::move(info)};
}

}  // namespace plate
