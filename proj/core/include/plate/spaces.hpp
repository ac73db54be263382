#pragma once

#include "plate/mesh.hpp"
#include "plate/polynomial.hpp"
#include "plate/shapes.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace plate {

enum class SpaceKind { Morley, DGP2, C0IP, HCT };

[[nodiscard]] const char* to_string(SpaceKind k) noexcept;
[[nodiscard]] ElementKind element_kind(SpaceKind k) noexcept;

/// Global dof: kind, attached mesh entity (vertex, edge or triangle id) and location.
struct GlobalDof {
  DofKind kind;
  int entity;
  Point location;
};

/// Global numbering of a discrete space. Boundary dofs of the H^2_0-type
/// spaces are constrained to zero and carry no global index (-1 in the
/// local-to-global table).
class DofMap {
public:
  DofMap(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

  [[nodiscard]] SpaceKind kind() const noexcept { return kind_; }
  [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(dofs_.size()); }
  [[nodiscard]] int local_size() const noexcept { return local_size_; }
  [[nodiscard]] int num_constrained() const noexcept { return n_constrained_; }

  [[nodiscard]] std::span<const int> local_to_global(int t) const {
    return {l2g_.data() + static_cast<std::size_t>(t) * local_size_, static_cast<std::size_t>(local_size_)};
  }
  /// Multiplier between global and local dof (edge normal dofs flip with the edge orientation).
  [[nodiscard]] std::span<const double> local_sign(int t) const {
    return {sign_.data() + static_cast<std::size_t>(t) * local_size_, static_cast<std::size_t>(local_size_)};
  }
  [[nodiscard]] const ShapeSet& shape_set(int t) const { return shapes_[t]; }
  [[nodiscard]] const GlobalDof& dof(int g) const { return dofs_[g]; }

  /// Local coefficient vector of triangle t for a global coefficient vector.
  [[nodiscard]] Eigen::VectorXd local_coefficients(int t, const Eigen::VectorXd& global) const;

  /// Global index of the vertex-value dof at vertex v (-1 if constrained or absent).
  [[nodiscard]] int vertex_dof(int v) const { return vertex_dof_.empty() ? -1 : vertex_dof_[v]; }
  /// Global index of the edge dof of edge e (-1 if constrained or absent).
  [[nodiscard]] int edge_dof(int e) const { return edge_dof_.empty() ? -1 : edge_dof_[e]; }

private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceKind kind_;
  int local_size_ = 0;
  int n_constrained_ = 0;
  std::vector<ShapeSet> shapes_;
  std::vector<int> l2g_;
  std::vector<double> sign_;
  std::vector<GlobalDof> dofs_;
  std::vector<int> vertex_dof_;
  std::vector<int> edge_dof_;
};

/// Anything that can be evaluated triangle by triangle with up to second derivatives.
class PiecewiseFunction {
public:
  virtual ~PiecewiseFunction() = default;
  [[nodiscard]] virtual Jet eval(int t, const Point& x) const = 0;
  /// True if the function is only piecewise polynomial on the centroid split
  /// of each triangle (quadrature must then run subtriangle by subtriangle).
  [[nodiscard]] virtual bool macro_split() const { return false; }
};

/// Globally smooth function given by a callable.
class SmoothFunction final : public PiecewiseFunction {
public:
  explicit SmoothFunction(std::function<Jet(const Point&)> f) : f_(std::move(f)) {}
  [[nodiscard]] Jet eval(int, const Point& x) const override { return f_(x); }
  [[nodiscard]] Jet operator()(const Point& x) const { return f_(x); }

private:
  std::function<Jet(const Point&)> f_;
};

/// Coefficient vector on a DofMap.
class DiscreteField final : public PiecewiseFunction {
public:
  DiscreteField(std::shared_ptr<const DofMap> dofmap, Eigen::VectorXd coefficients);
  explicit DiscreteField(std::shared_ptr<const DofMap> dofmap);

  [[nodiscard]] const DofMap& dofmap() const noexcept { return *dofmap_; }
  [[nodiscard]] const std::shared_ptr<const DofMap>& dofmap_ptr() const noexcept { return dofmap_; }
  [[nodiscard]] const Mesh& mesh() const noexcept { return dofmap_->mesh(); }
  [[nodiscard]] const Eigen::VectorXd& coefficients() const noexcept { return c_; }
  [[nodiscard]] Eigen::VectorXd& coefficients() noexcept { return c_; }

  /// Exact evaluation; throws if x lies outside triangle t.
  [[nodiscard]] Jet eval(int t, const Point& x) const override;
  [[nodiscard]] bool macro_split() const override { return dofmap_->kind() == SpaceKind::HCT; }

private:
  std::shared_ptr<const DofMap> dofmap_;
  Eigen::VectorXd c_;
};

[[nodiscard]] Jet eval(const DiscreteField& field, int t, const Point& x);

/// Physical quadrature on a triangle; split = integrate subtriangle by subtriangle.
struct ElementRule {
  std::vector<Point> x;
  std::vector<double> w;
};
[[nodiscard]] ElementRule element_rule(const Mesh& mesh, int t, int degree, bool split = false);

/// Physical Gauss rule on an edge; t is the parameter from A (0) to B (1).
struct EdgeRule {
  std::vector<Point> x;
  std::vector<double> w;
  std::vector<double> t;
};
[[nodiscard]] EdgeRule edge_rule(const Mesh& mesh, int e, int degree);

/// One-sided traces on an edge plus jumps/averages with the boundary convention
/// (jump = average = trace on boundary edges).
struct EdgeSamples {
  EdgeRule rule;
  std::vector<Jet> plus, minus;
  std::vector<double> value_jump, normal_jump, value_avg;
  std::vector<Eigen::Vector2d> grad_jump, grad_avg;
  std::vector<Eigen::Matrix2d> hess_jump, hess_avg;
};
[[nodiscard]] EdgeSamples edge_jumps(const Mesh& mesh, const PiecewiseFunction& v, int e, int degree);

/// j_h(v, w): vertex value-jump products / h_E^2 plus products of the mean
/// normal-derivative jumps, summed over all edges.
[[nodiscard]] double jh_product(const Mesh& mesh, const PiecewiseFunction& v, const PiecewiseFunction& w);
/// Per-edge contributions of j_h(v, v).
[[nodiscard]] std::vector<double> jh_edge_terms(const Mesh& mesh, const PiecewiseFunction& v);

/// Piecewise Hessian product sum_T int_T D^2 v : D^2 w.
[[nodiscard]] double apw_product(const Mesh& mesh, const PiecewiseFunction& v, const PiecewiseFunction& w,
                                 int degree = 4);
/// |||v - w|||_pw with the given quadrature degree.
[[nodiscard]] double energy_distance(const Mesh& mesh, const PiecewiseFunction& v, const PiecewiseFunction& w,
                                     int degree = 10);
/// ||v||_h = (|||v|||_pw^2 + j_h(v, v))^(1/2).
[[nodiscard]] double norm_h(const Mesh& mesh, const PiecewiseFunction& v);

/// Difference v - w as a piecewise function (both on the same mesh).
class DifferenceFunction final : public PiecewiseFunction {
public:
  DifferenceFunction(const PiecewiseFunction& v, const PiecewiseFunction& w) : v_(v), w_(w) {}
  [[nodiscard]] Jet eval(int t, const Point& x) const override;
  [[nodiscard]] bool macro_split() const override { return v_.macro_split() || w_.macro_split(); }

private:
  const PiecewiseFunction& v_;
  const PiecewiseFunction& w_;
};

/// Exact re-expression of a P2-type field (Morley, C0IP or dG-P2) in dG-P2.
[[nodiscard]] DiscreteField to_dg_p2(const DiscreteField& field);

}  // namespace plate
