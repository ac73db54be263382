#pragma once

#include "plate/estimate.hpp"
#include "plate/solve.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace plate {

/// Minimal greedy set carrying a theta-fraction of the squared total; largest
/// indicators first, ties by smaller id. Returned ids are sorted. All-zero
/// indicators give an empty set.
[[nodiscard]] std::vector<int> mark_doerfler(std::span<const double> indicators, double theta);

/// Element indicators from per-edge values, each split equally over the adjacent triangles.
[[nodiscard]] std::vector<double> edge_to_elements(const Mesh& mesh, std::span<const double> edge_values);

struct LevelRecord {
  int level = 0;
  int ndof = 0;
  int ntriangles = 0;
  double hmax = 0.0;
  double err_pw = -1.0;  // negative when no exact solution is known
  double err_h = -1.0;
  double est_a = 0.0;        // sqrt of the first-family bound
  double est_b = 0.0;        // sqrt of the second-family bound
  double est_theorem = 0.0;  // sqrt of EstimatorReport::primary()
  double osc = 0.0;
  double apx = 0.0;
  double seconds = 0.0;

  /// Error in the scheme's natural norm (pw for Morley, h otherwise).
  [[nodiscard]] double error(Scheme s) const { return s == Scheme::Morley ? err_pw : err_h; }
};

struct StudyRecord {
  Scheme scheme = Scheme::Morley;
  std::string label;
  std::vector<LevelRecord> levels;
};

struct LoopOptions {
  SchemeConfig scheme;
  SourceSpec source;
  ApproximationDegrees degrees;
  std::shared_ptr<const PiecewiseFunction> exact;  // optional
  double theta = 0.5;
  bool uniform = false;  // refine everything instead of marking
  int max_dofs = 20000;
  int max_levels = 40;
  double tolerance = 1e-8;  // stop when the estimator total falls below
};

/// solve, estimate, record for one mesh.
[[nodiscard]] LevelRecord evaluate_level(const std::shared_ptr<const Mesh>& mesh, const LoopOptions& options,
                                         int level, EstimatorReport* report_out = nullptr);

/// solve -> estimate -> mark -> bisect until the dof budget, level cap or tolerance.
[[nodiscard]] StudyRecord adaptive_loop(const std::shared_ptr<const Mesh>& initial, const LoopOptions& options);

}  // namespace plate
