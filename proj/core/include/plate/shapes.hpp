#pragma once

#include "plate/polynomial.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace plate {

enum class ElementKind { P2Lagrange, Morley, HCT };

enum class DofKind {
  VertexValue,
  VertexGradientX,
  VertexGradientY,
  EdgeMidpointValue,
  EdgeNormalMean,     // mean of the outer normal derivative over the edge
  EdgeMidpointNormal  // outer normal derivative at the edge midpoint
};

/// Local dof: kind plus local vertex index (vertex kinds) or local edge index
/// (edge kinds; edge i is opposite vertex i).
struct DofDescriptor {
  DofKind kind;
  int entity;
};

/// Local basis on one physical triangle. Shapes are stored as coefficients of
/// scaled monomials about the centroid (scale = diameter); HCT shapes have one
/// cubic per subtriangle K_i = conv(E_i, centroid).
class ShapeSet {
public:
  ShapeSet(ElementKind kind, const std::array<Point, 3>& vertices);

  [[nodiscard]] ElementKind kind() const noexcept { return kind_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(dofs_.size()); }
  [[nodiscard]] const DofDescriptor& dof(int i) const { return dofs_[i]; }
  [[nodiscard]] const std::array<Point, 3>& vertices() const noexcept { return x_; }
  [[nodiscard]] Point centroid() const { return (x_[0] + x_[1] + x_[2]) / 3.0; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] int degree() const noexcept { return kind_ == ElementKind::HCT ? 3 : 2; }
  [[nodiscard]] int num_pieces() const noexcept { return kind_ == ElementKind::HCT ? 3 : 1; }
  [[nodiscard]] int monomials() const noexcept { return monomial_count(degree()); }

  /// Coefficients, rows = piece * monomials() + monomial, columns = shapes.
  [[nodiscard]] const Eigen::MatrixXd& coefficients() const noexcept { return coef_; }

  /// Subtriangle containing x (0 for single-piece kinds).
  [[nodiscard]] int piece_of(const Point& x) const;
  /// Vertices of piece p: for HCT (v_{p+1}, v_{p+2}, centroid).
  [[nodiscard]] std::array<Point, 3> piece_vertices(int p) const;

  [[nodiscard]] Jet eval(int shape, const Point& x) const;
  [[nodiscard]] Jet eval_piece(int shape, int piece, const Point& x) const;
  /// Combination sum_j c_j * shape_j evaluated at x (piece chosen from x unless given).
  [[nodiscard]] Jet eval_combination(const Eigen::Ref<const Eigen::VectorXd>& c, const Point& x,
                                     int piece = -1) const;

  /// All shapes at x (piece chosen from x unless given); out is resized to size().
  void eval_all(const Point& x, std::vector<Jet>& out, int piece = -1) const;

  /// Outer unit normal of local edge i.
  [[nodiscard]] Point outer_normal(int i) const;

private:
  void build_p2(bool morley);
  void build_hct();

  ElementKind kind_;
  std::array<Point, 3> x_;
  double scale_;
  std::vector<DofDescriptor> dofs_;
  Eigen::MatrixXd coef_;
};

[[nodiscard]] ShapeSet shapes(ElementKind kind, const std::array<Point, 3>& vertices);

}  // namespace plate
