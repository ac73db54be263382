#pragma once

#include "plate/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace plate {

struct SolveResult {
  Eigen::VectorXd x;
  double relative_residual = 0.0;  // ||Ax - b|| / ||b|| in extended precision
  double backward_error = 0.0;     // componentwise max_i |r_i| / (|A||x| + |b|)_i
  double min_pivot = 0.0;          // smallest |D_ii| of the scaled factorization
  int refinement_steps = 0;
  bool rounding_limited = false;  // residual above tolerance but x exact to working precision
  std::string method;
};

/// Direct sparse solve (LDL^T if symmetric, LU otherwise) on the diagonally
/// scaled system, followed by iterative refinement with long double residuals.
/// Throws NumericalError on factorization failure, or if the residual stays
/// above `tolerance` while the componentwise backward error exceeds 4 eps.
/// Penalty systems on fine meshes reach the second case: storing x in double
/// alone leaves a residual of order eps |A||x|, which grows like h^-4.
[[nodiscard]] SolveResult solve_linear(const LinearSystem& system, double tolerance = 1e-10);

struct EllipticityEstimate {
  double alpha = 0.0;  // smallest eigenvalue of (sym A) x = lambda G x, G the ||.||_h Gram
  int factorizations = 0;
};

/// Bisection on the inertia of A_sym - sigma G. Reports non-positive values
/// without failing; throws NumericalError if no lower bracket is found.
[[nodiscard]] EllipticityEstimate estimate_ellipticity(const DofMap& dofmap, const SchemeConfig& config,
                                                       double rel_tol = 1e-10);

struct HConstantEstimate {
  double lambda = 0.0;  // max sampled quotient; a lower bound for Lambda_H
  int used = 0;
  int skipped = 0;
  std::uint64_t seed = 0;
};

/// Precomputed operators for the quotient
///   sup_v (a_h(w, v) - a(J_h w, J_h v)) / (||w - J_h w||_h ||v||_h).
class HQuotient {
public:
  HQuotient(const DofMap& dofmap, const SchemeConfig& config);
  /// Quotient for one w; empty if ||w - J_h w||_h <= 1e-14 ||w||_h.
  [[nodiscard]] std::optional<double> operator()(const Eigen::VectorXd& w) const;
  /// ||w - J_h w||_h.
  [[nodiscard]] double distance(const Eigen::VectorXd& w) const;

private:
  SparseMatrix A_, G_, K_, M_, S_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> g_solver_;
};

/// Max of the quotient over `samples` random coefficient vectors (fixed seed).
[[nodiscard]] HConstantEstimate estimate_H_constant(const DofMap& dofmap, const SchemeConfig& config, int samples = 100,
                                                    std::uint64_t seed = 20240611);

/// Discrete solution of one scheme on one mesh.
struct Solution {
  std::shared_ptr<const DofMap> dofmap;
  DiscreteField field;
  SolveResult info;
};
[[nodiscard]] Solution solve_problem(const std::shared_ptr<const Mesh>& mesh, const SchemeConfig& config,
                                     const SourceSpec& source);

}  // namespace plate
