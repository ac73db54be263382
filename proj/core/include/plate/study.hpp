#pragma once

#include "plate/adapt.hpp"
#include "plate/config.hpp"

#include <iosfwd>

namespace plate {

/// Loop options of a run; the manufactured source on the square carries its exact solution.
[[nodiscard]] LoopOptions loop_options(const RunConfig& config);

/// Uniform or adaptive study; writes study.csv (and study.svg if requested) into config.output.
/// Progress lines go to `log` when given.
[[nodiscard]] StudyRecord run_study(const RunConfig& config, std::ostream* log = nullptr);

/// One solve on the initial mesh; writes estimators.csv and per-entity indicator files.
[[nodiscard]] LevelRecord run_solve(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace plate
