#pragma once

#include "plate/mesh.hpp"
#include "plate/source.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace plate {

/// Scalar H^1 function with its gradient.
struct GradField {
  std::function<double(const Point&)> value;
  std::function<Eigen::Vector2d(const Point&)> grad;
};

/// Crouzeix-Raviart solution of -Delta u = f with homogeneous Dirichlet data.
/// Coefficients are the midpoint values on interior edges (boundary edges are zero).
struct CrSolution {
  std::vector<double> edge_value;  // per mesh edge
};

[[nodiscard]] CrSolution solve_cr_poisson(const Mesh& mesh, const ScalarField& f);

/// Constant gradient of the CR function on triangle t.
[[nodiscard]] Eigen::Vector2d cr_gradient(const Mesh& mesh, const CrSolution& u, int t);
/// Value of the CR function at x in triangle t.
[[nodiscard]] double cr_value(const Mesh& mesh, const CrSolution& u, int t, const Point& x);

/// I_CR v: edge means of v (all edges).
[[nodiscard]] CrSolution interpolate_cr(const Mesh& mesh, const ScalarField& v);

/// ||h_T^-1 (v - I_CR v)|| / ||grad v||.
[[nodiscard]] double cr_interpolation_ratio(const Mesh& mesh, const GradField& v);

struct CrLevel {
  int level = 0;
  int ndof = 0;
  double hmax = 0.0;
  double error = 0.0;        // ||grad_pw (u - u_CR)||
  double hf = 0.0;           // ||h_T f||
  double jump = 0.0;         // (sum_E h_E ||[grad u_CR . nu]||^2)^(1/2), interior edges
  double jump_constant = 0.0;  // max_E h_E^(1/2)||[grad u_CR . nu]||_E / ||h_T f||_omega(E)
};

struct CrStudy {
  std::vector<CrLevel> levels;
  double slope = 0.0;  // error against hmax
};

/// u = x(1-x)y(1-y) with f = 2(x(1-x) + y(1-y)) on the square, or f = 0.
[[nodiscard]] CrStudy cr_poisson_demo(int levels, bool zero_source = false);

}  // namespace plate
