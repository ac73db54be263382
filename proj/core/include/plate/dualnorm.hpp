#pragma once

#include "plate/assembly.hpp"
#include "plate/estimate.hpp"

#include <memory>
#include <optional>

namespace plate {

/// Energy norm of the Riesz representative, in the HCT space of the depth-times
/// uniformly refined mesh, of the functional
///   v -> int Lambda_0 v + Lambda_1 . grad v + Lambda_2 : D^2 v
/// with piecewise polynomial Lambda on `coarse` (only F0, F1, F2 of `lambda` are used).
/// With `complement` set the functional is composed with 1 - J_h I_h I_M on the
/// coarse mesh (I_h chosen by the branch). A lower bound of the H^-2 dual norm
/// that increases with depth.
[[nodiscard]] double surrogate_dual_norm(const std::shared_ptr<const Mesh>& coarse, const SourceApproximation& lambda,
                                         int depth, std::optional<TransferKind> complement = std::nullopt);

/// Same for a functional given as a coefficient-space load on the fine HCT space.
struct FineSpace {
  std::vector<std::shared_ptr<const Mesh>> chain;  // coarse first
  std::vector<int> ancestor;                       // coarse triangle of each fine triangle
  std::shared_ptr<const DofMap> hct;
};
[[nodiscard]] FineSpace make_fine_space(const std::shared_ptr<const Mesh>& coarse, int depth);

}  // namespace plate
