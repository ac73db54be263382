#pragma once

#include "plate/mesh.hpp"

#include <Eigen/Core>

#include <vector>

namespace plate {

/// Value, gradient and Hessian at a point.
struct Jet {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

[[nodiscard]] constexpr int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }
/// Graded ordering: block n = a + b starts at n(n+1)/2, position b within the block.
[[nodiscard]] constexpr int monomial_index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

/// Values and derivatives of all scaled monomials xi^a eta^b, xi = (x - x0)/s,
/// up to a given degree, evaluated at one point (derivatives in physical x).
struct MonomialTable {
  Eigen::RowVectorXd v, dx, dy, dxx, dxy, dyy;

  MonomialTable(int degree, const Point& x, const Point& origin, double scale);
};

/// Bivariate polynomial in scaled monomials about `origin` with length `scale`.
class Polynomial {
public:
  Polynomial() : Polynomial(0) {}
  explicit Polynomial(int degree, Point origin = Point::Zero(), double scale = 1.0);

  [[nodiscard]] static Polynomial constant(double c, Point origin = Point::Zero(), double scale = 1.0);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] const Point& origin() const noexcept { return origin_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] Eigen::VectorXd& coefficients() noexcept { return c_; }
  [[nodiscard]] const Eigen::VectorXd& coefficients() const noexcept { return c_; }
  [[nodiscard]] double& coef(int a, int b) { return c_[monomial_index(a, b)]; }
  [[nodiscard]] double coef(int a, int b) const { return c_[monomial_index(a, b)]; }

  [[nodiscard]] double value(const Point& x) const;
  [[nodiscard]] Jet jet(const Point& x) const;

  [[nodiscard]] Polynomial dx() const;
  [[nodiscard]] Polynomial dy() const;

  /// Same polynomial stored with a larger degree (zero padded).
  [[nodiscard]] Polynomial padded(int degree) const;
  /// Same polynomial expressed about another origin and scale.
  [[nodiscard]] Polynomial reframed(const Point& origin, double scale) const;

  /// Largest degree with a coefficient above tol (relative to the largest one).
  [[nodiscard]] int effective_degree(double tol = 1e-13) const;
  [[nodiscard]] bool is_zero(double tol = 0.0) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  [[nodiscard]] friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  [[nodiscard]] friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  [[nodiscard]] friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  [[nodiscard]] friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  [[nodiscard]] friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
  int degree_ = 0;
  Point origin_ = Point::Zero();
  double scale_ = 1.0;
  Eigen::VectorXd c_;
};

/// Univariate polynomial in the edge parameter t in [0, 1] (t = 0 at A).
class EdgePolynomial {
public:
  EdgePolynomial() : c_(Eigen::VectorXd::Zero(1)) {}
  explicit EdgePolynomial(Eigen::VectorXd coefficients) : c_(std::move(coefficients)) {}
  [[nodiscard]] static EdgePolynomial constant(double c) {
    return EdgePolynomial(Eigen::VectorXd::Constant(1, c));
  }

  [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] const Eigen::VectorXd& coefficients() const noexcept { return c_; }
  [[nodiscard]] double value(double t) const;
  [[nodiscard]] bool is_zero(double tol = 0.0) const;

private:
  Eigen::VectorXd c_;
};

}  // namespace plate
