#pragma once

#include <Eigen/Core>

#include <vector>

namespace plate {

/// Quadrature on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}
/// (points in reference coordinates, weights summing to 1/2) or on the
/// reference interval [0, 1] (points t, weights summing to 1).
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;  // edge rules use x() = t
  std::vector<double> weights;
  int exactness_degree = 0;

  [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

/// Symmetric positive-weight triangle rule exact at least to `degree`, 1 <= degree <= 10.
[[nodiscard]] const QuadratureRule& quad_triangle(int degree);

/// Gauss-Legendre rule on [0, 1] exact at least to `degree`, 0 <= degree <= 9.
[[nodiscard]] const QuadratureRule& quad_edge(int degree);

/// n-point Gauss-Legendre rule on [0, 1] for any n >= 1.
[[nodiscard]] QuadratureRule gauss_legendre(int n);

}  // namespace plate
