#pragma once

#include "plate/assembly.hpp"
#include "plate/mesh.hpp"
#include "plate/source.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace plate {

enum class StudyKind { Uniform, Adaptive, Verify };

/// Source block of a run: a named closed form or explicit components.
struct SourceConfig {
  std::string id = "manufactured";  // manufactured | zero | unit | center_point | general
  double f0 = 0.0;
  Eigen::Vector2d f1 = Eigen::Vector2d::Zero();
  Eigen::Vector3d f2 = Eigen::Vector3d::Zero();  // xx, xy, yy
  bool has_f0 = false, has_f1 = false, has_f2 = false;
  std::vector<SourceSpec::PointLoad> points;
  std::vector<SourceSpec::LineLoad> lines;  // constant densities
};

struct RunConfig {
  std::string domain = "square";  // square | lshape | file:<path>
  int initial_refinements = 1;
  SchemeConfig scheme;
  SourceConfig source;
  StudyKind kind = StudyKind::Uniform;
  int levels = 4;
  int max_dofs = 20000;
  double theta = 0.5;
  ApproximationDegrees degrees;
  std::string output = "out";
  bool svg = false;
  std::uint64_t seed = 20240611;
};

/// Line-oriented `key = value` with `[section]` headers and `#` comments.
/// Sections: mesh, scheme, source, study. Throws ConfigError with the line number.
[[nodiscard]] RunConfig parse_config(std::istream& in);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Initial mesh of the run (after initial_refinements).
[[nodiscard]] std::shared_ptr<const Mesh> make_mesh(const RunConfig& config);
/// SourceSpec described by the source block.
[[nodiscard]] SourceSpec make_source(const SourceConfig& source);
[[nodiscard]] const char* to_string(StudyKind k) noexcept;

}  // namespace plate
