#pragma once

#include "plate/spaces.hpp"

#include <Eigen/SparseCore>

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace plate {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Averaged Morley interpolation I_M as a matrix from `from` coefficients to
/// Morley coefficients (edge means by degree-4 Gauss, exact for discrete traces).
[[nodiscard]] SparseMatrix morley_interpolation_matrix(const DofMap& from, const DofMap& morley);

/// I_M of a discrete field of any kind.
[[nodiscard]] DiscreteField interpolate_morley(const DiscreteField& v,
                                               std::shared_ptr<const DofMap> morley = nullptr);
/// I_M of any piecewise-evaluable function; edge means with the given Gauss degree.
[[nodiscard]] DiscreteField interpolate_morley(const PiecewiseFunction& v, std::shared_ptr<const DofMap> morley,
                                               int edge_degree = 6);

/// I_C: Morley -> S^2_0 (vertex values copied, interior midpoints averaged).
[[nodiscard]] SparseMatrix c0_transfer_matrix(const DofMap& morley, const DofMap& c0);
[[nodiscard]] DiscreteField transfer_c0(const DiscreteField& v_morley, std::shared_ptr<const DofMap> c0 = nullptr);

/// Companion J: Morley -> HCT, a right inverse of I_M.
[[nodiscard]] SparseMatrix companion_matrix(const DofMap& morley, const DofMap& hct);
[[nodiscard]] DiscreteField companion(const DiscreteField& v_morley, std::shared_ptr<const DofMap> hct = nullptr);

/// J_h = J I_M from any discrete space into HCT.
[[nodiscard]] SparseMatrix smoother_matrix(const DofMap& from, const DofMap& hct);
[[nodiscard]] DiscreteField smoother(const DiscreteField& v, std::shared_ptr<const DofMap> hct = nullptr);

struct OperatorReport {
  SpaceKind input;
  SpaceKind output;
  std::vector<std::string> chain;  // applied first to last
  double distance_h = std::numeric_limits<double>::quiet_NaN();   // ||v - output||_h
  double distance_pw = std::numeric_limits<double>::quiet_NaN();  // |||v - output|||_pw
};

/// Diagnostics for output = chain(input).
[[nodiscard]] OperatorReport operator_report(const DiscreteField& input, const DiscreteField& output,
                                             std::vector<std::string> chain);

}  // namespace plate
