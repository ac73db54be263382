#include "plate/polynomial.hpp"

#include "plate/errors.hpp"

#include <algorithm>
#include <cmath>

namespace plate {

MonomialTable::MonomialTable(int degree, const Point& x, const Point& origin, double scale) {
  const int n = monomial_count(degree);
  v.setZero(n);
  dx.setZero(n);
  dy.setZero(n);
  dxx.setZero(n);
  dxy.setZero(n);
  dyy.setZero(n);
  const double xi = (x.x() - origin.x()) / scale;
  const double eta = (x.y() - origin.y()) / scale;
  const double is = 1.0 / scale;
  const double is2 = is * is;
  if (degree > 15) throw Error("monomial table degree must not exceed 15");
  double px[16], py[16];
  px[0] = py[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    px[k] = px[k - 1] * xi;
    py[k] = py[k - 1] * eta;
  }
  auto pw = [](const double* p, int k) { return k < 0 ? 0.0 : p[k]; };
  for (int d = 0; d <= degree; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      const int i = monomial_index(a, b);
      v[i] = px[a] * py[b];
      dx[i] = is * a * pw(px, a - 1) * py[b];
      dy[i] = is * b * px[a] * pw(py, b - 1);
      dxx[i] = is2 * a * (a - 1) * pw(px, a - 2) * py[b];
      dxy[i] = is2 * a * b * pw(px, a - 1) * pw(py, b - 1);
      dyy[i] = is2 * b * (b - 1) * px[a] * pw(py, b - 2);
    }
  }
}

Polynomial::Polynomial(int degree, Point origin, double scale)
    : degree_(degree), origin_(std::move(origin)), scale_(scale),
      c_(Eigen::VectorXd::Zero(monomial_count(degree))) {
  if (degree < 0 || degree > 15) throw Error("polynomial degree must lie in 0..15");
  if (!(scale > 0.0)) throw Error("polynomial frame scale must be positive");
}

Polynomial Polynomial::constant(double c, Point origin, double scale) {
  Polynomial p(0, std::move(origin), scale);
  p.c_[0] = c;
  return p;
}

double Polynomial::value(const Point& x) const {
  const double xi = (x.x() - origin_.x()) / scale_;
  const double eta = (x.y() - origin_.y()) / scale_;
  double px[16], py[16];
  px[0] = py[0] = 1.0;
  for (int k = 1; k <= degree_; ++k) {
    px[k] = px[k - 1] * xi;
    py[k] = py[k - 1] * eta;
  }
  double sum = 0.0;
  for (int d = 0; d <= degree_; ++d)
    for (int b = 0; b <= d; ++b) sum += c_[monomial_index(d - b, b)] * px[d - b] * py[b];
  return sum;
}

Jet Polynomial::jet(const Point& x) const {
  const MonomialTable m(degree_, x, origin_, scale_);
  Jet j;
  j.value = m.v.dot(c_);
  j.grad = {m.dx.dot(c_), m.dy.dot(c_)};
  const double xy = m.dxy.dot(c_);
  j.hess << m.dxx.dot(c_), xy, xy, m.dyy.dot(c_);
  return j;
}

Polynomial Polynomial::dx() const {
  Polynomial r(std::max(0, degree_ - 1), origin_, scale_);
  for (int d = 1; d <= degree_; ++d)
    for (int b = 0; b < d; ++b) {
      const int a = d - b;
      r.coef(a - 1, b) += a * coef(a, b) / scale_;
    }
  return r;
}

Polynomial Polynomial::dy() const {
  Polynomial r(std::max(0, degree_ - 1), origin_, scale_);
  for (int d = 1; d <= degree_; ++d)
    for (int b = 1; b <= d; ++b) {
      const int a = d - b;
      r.coef(a, b - 1) += b * coef(a, b) / scale_;
    }
  return r;
}

Polynomial Polynomial::padded(int degree) const {
  if (degree <= degree_) return *this;
  Polynomial r(degree, origin_, scale_);
  r.c_.head(c_.size()) = c_;
  return r;
}

Polynomial Polynomial::reframed(const Point& origin, double scale) const {
  if (origin == origin_ && scale == scale_) return *this;
  // xi_old = (origin - origin_)/scale_ + (scale/scale_) xi_new
  Polynomial X(1, origin, scale), Y(1, origin, scale);
  X.coef(0, 0) = (origin.x() - origin_.x()) / scale_;
  X.coef(1, 0) = scale / scale_;
  Y.coef(0, 0) = (origin.y() - origin_.y()) / scale_;
  Y.coef(0, 1) = scale / scale_;
  std::vector<Polynomial> xp{Polynomial::constant(1.0, origin, scale)};
  std::vector<Polynomial> yp{Polynomial::constant(1.0, origin, scale)};
  for (int k = 1; k <= degree_; ++k) {
    xp.push_back(xp.back() * X);
    yp.push_back(yp.back() * Y);
  }
  Polynomial r(degree_, origin, scale);
  for (int d = 0; d <= degree_; ++d)
    for (int b = 0; b <= d; ++b) {
      const double c = coef(d - b, b);
      if (c != 0.0) r += (xp[d - b] * yp[b]) * c;
    }
  return r;
}

int Polynomial::effective_degree(double tol) const {
  const double ref = c_.cwiseAbs().maxCoeff();
  if (ref == 0.0) return 0;
  for (int d = degree_; d > 0; --d)
    for (int b = 0; b <= d; ++b)
      if (std::abs(coef(d - b, b)) > tol * ref) return d;
  return 0;
}

bool Polynomial::is_zero(double tol) const { return c_.cwiseAbs().maxCoeff() <= tol; }

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  const Polynomial other = o.reframed(origin_, scale_);
  if (other.degree_ > degree_) *this = padded(other.degree_);
  c_.head(other.c_.size()) += other.c_;
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += o * -1.0; }

Polynomial& Polynomial::operator*=(double s) {
  c_ *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b_in) {
  const Polynomial b = b_in.reframed(a.origin(), a.scale());
  Polynomial r(a.degree() + b.degree(), a.origin(), a.scale());
  for (int d1 = 0; d1 <= a.degree(); ++d1)
    for (int b1 = 0; b1 <= d1; ++b1) {
      const double ca = a.coef(d1 - b1, b1);
      if (ca == 0.0) continue;
      for (int d2 = 0; d2 <= b.degree(); ++d2)
        for (int b2 = 0; b2 <= d2; ++b2)
          r.coef(d1 - b1 + d2 - b2, b1 + b2) += ca * b.coef(d2 - b2, b2);
    }
  return r;
}

double EdgePolynomial::value(double t) const {
  double s = 0.0;
  for (int k = degree(); k >= 0; --k) s = s * t + c_[k];
  return s;
}

bool EdgePolynomial::is_zero(double tol) const { return c_.cwiseAbs().maxCoeff() <= tol; }

}  // namespace plate
