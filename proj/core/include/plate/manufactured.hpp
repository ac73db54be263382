#pragma once

#include "plate/source.hpp"
#include "plate/spaces.hpp"

#include <array>
#include <memory>
#include <string>

namespace plate {

/// Exact solution with the matching L2 source f = Delta^2 u.
struct ManufacturedCase {
  std::string name;
  std::shared_ptr<const SmoothFunction> u;
  ScalarField f;

  [[nodiscard]] SourceSpec source() const {
    SourceSpec s;
    s.f0 = f;
    return s;
  }
};

/// u = (x(1-x)y(1-y))^2 on the unit square.
[[nodiscard]] ManufacturedCase manufactured_square();

/// Evaluates u = (x(1-x)y(1-y))^2 and its derivatives.
[[nodiscard]] Jet square_bubble_squared(const Point& x);

/// v = (x(1-x)y(1-y))^2 p(x, y) with p = c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2;
/// an H^2_0 function on the unit square.
[[nodiscard]] std::shared_ptr<const SmoothFunction> weighted_bubble(const std::array<double, 6>& c);

}  // namespace plate
