#pragma once

#include "plate/spaces.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace plate {

struct CheckResult {
  std::string name;
  std::string description;  // one line, printed on failure
  bool passed = false;
  std::string detail;       // measured quantity
  double seconds = 0.0;
};

/// Runs the named runtime invariants (operator exactness, interpolation
/// constants, ellipticity, estimator identities, CSV round trip). Each result
/// is printed to `log` as it completes.
[[nodiscard]] std::vector<CheckResult> run_verify_suite(std::uint64_t seed, std::ostream* log = nullptr);

/// ||h_T^-2 (v - I_M v)|| / |||v|||_pw with a fresh Morley space on `mesh`.
[[nodiscard]] double morley_interpolation_ratio(const std::shared_ptr<const Mesh>& mesh, const PiecewiseFunction& v);

}  // namespace plate
