#include "plate/manufactured.hpp"

namespace plate {

Jet square_bubble_squared(const Point& p) {
  const double x = p.x(), y = p.y();
  const double a = x * (1 - x), b = y * (1 - y);
  const double da = 1 - 2 * x, db = 1 - 2 * y;
  // u = a^2 b^2 with a'' = b'' = -2
  Jet j;
  j.value = a * a * b * b;
  j.grad = {2 * a * da * b * b, 2 * b * db * a * a};
  const double uxx = (2 * da * da - 4 * a) * b * b;
  const double uyy = (2 * db * db - 4 * b) * a * a;
  const double uxy = 4 * a * da * b * db;
  j.hess << uxx, uxy, uxy, uyy;
  return j;
}

std::shared_ptr<const SmoothFunction> weighted_bubble(const std::array<double, 6>& c) {
  return std::make_shared<const SmoothFunction>([c](const Point& p) {
    const double x = p.x(), y = p.y();
    const Jet b = square_bubble_squared(p);
    const double q = c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    const Eigen::Vector2d dq(c[1] + 2 * c[3] * x + c[4] * y, c[2] + c[4] * x + 2 * c[5] * y);
    Eigen::Matrix2d hq;
    hq << 2 * c[3], c[4], c[4], 2 * c[5];
    Jet j;
    j.value = b.value * q;
    j.grad = b.grad * q + b.value * dq;
    j.hess = b.hess * q + b.grad * dq.transpose() + dq * b.grad.transpose() + b.value * hq;
    return j;
  });
}

ManufacturedCase manufactured_square() {
  ManufacturedCase c;
  c.name = "square_bubble";
  c.u = std::make_shared<const SmoothFunction>(square_bubble_squared);
  // Delta^2 u expanded symbolically (sympy).
  c.f = [](const Point& p) {
    const double x = p.x(), y = p.y();
    const double x2 = x * x, y2 = y * y;
    return 24 * x2 * x2 - 48 * x2 * x + 288 * x2 * y2 - 288 * x2 * y + 72 * x2 - 288 * x * y2 + 288 * x * y -
           48 * x + 24 * y2 * y2 - 48 * y2 * y + 72 * y2 - 48 * y + 8;
  };
  return c;
}

}  // namespace plate
