#pragma once

#include "plate/source.hpp"
#include "plate/spaces.hpp"
#include "plate/transfer.hpp"

#include <memory>
#include <string>

namespace plate {

enum class Scheme { Morley, DG1, DG2, C0IP, WOPSIP };
enum class Smoother { Identity, Companion };  // Q = id, Q = J_h

[[nodiscard]] const char* to_string(Scheme s) noexcept;
[[nodiscard]] const char* to_string(Smoother q) noexcept;
/// Accepts morley, dg1, dg2, c0ip, wopsip (case-insensitive); throws ConfigError.
[[nodiscard]] Scheme parse_scheme(const std::string& name);
[[nodiscard]] Smoother parse_smoother(const std::string& name);
[[nodiscard]] SpaceKind space_of(Scheme s) noexcept;

struct SchemeConfig {
  Scheme scheme = Scheme::Morley;
  double theta = 1.0;
  double sigma1 = 20.0;
  double sigma2 = 20.0;
  double sigma_ip = 20.0;
  Smoother smoother = Smoother::Identity;

  /// Throws ConfigError on theta outside [-1, 1] or non-positive penalties used by the scheme.
  void validate() const;
  [[nodiscard]] bool symmetric() const noexcept;
};

struct LinearSystem {
  SparseMatrix matrix;  // A(i, j) = a_h(phi_j, phi_i)
  Eigen::VectorXd rhs;
  bool symmetric = false;
};

/// Matrix of the configured discrete form on a dof map of kind space_of(config.scheme).
[[nodiscard]] SparseMatrix assemble_matrix(const DofMap& dofmap, const SchemeConfig& config);

/// F^(Q phi_i) for every basis function.
[[nodiscard]] Eigen::VectorXd assemble_rhs(const DofMap& dofmap, const SchemeConfig& config,
                                           const SourceSpec& source);

[[nodiscard]] LinearSystem assemble(const DofMap& dofmap, const SchemeConfig& config, const SourceSpec& source);

/// Gram matrix of a_pw on any space (HCT integrated on the split).
[[nodiscard]] SparseMatrix stiffness_pw(const DofMap& dofmap);
/// a_pw(psi_j, phi_i) for phi in `test`, psi in `trial` (same mesh).
[[nodiscard]] SparseMatrix mixed_stiffness_pw(const DofMap& test, const DofMap& trial);
/// Gram matrix of sum_E h_E^p (vertex jump products / h_E^2 + mean normal jump products);
/// p = 0 gives j_h, p = -2 gives the WOPSIP stabilisation c_P.
[[nodiscard]] SparseMatrix jump_gram(const DofMap& dofmap, double h_power);
/// Gram matrix of ||.||_h.
[[nodiscard]] SparseMatrix norm_h_gram(const DofMap& dofmap);

/// F^(phi_i) with one-sided traces averaged on edges and point loads split
/// equally over the vertex patch. For conforming spaces this is F(phi_i).
[[nodiscard]] Eigen::VectorXd load_vector(const DofMap& dofmap, const SourceSpec& source);

/// Penalty forms c(v, v) entering the penalty-based bounds: c_dG, c_IP or c_P
/// depending on the scheme (0 for Morley).
[[nodiscard]] double penalty_energy(const DiscreteField& v, const SchemeConfig& config);

}  // namespace plate
