#pragma once

#include "plate/adapt.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace plate {

/// `level,ndof,hmax,err_energy,estA,estB,est_theorem,osc,apx,eff_index`;
/// unknown errors are written as nan.
void write_study_csv(std::ostream& os, const StudyRecord& study);
/// Inverse of write_study_csv (scheme and label are not stored); throws Error on malformed input.
[[nodiscard]] StudyRecord read_study_csv(std::istream& in);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

/// 800x600 log-log plot with decade grid, one polyline per series and
/// reference slopes -1/2 and -1.
void write_svg(std::ostream& os, const std::vector<PlotSeries>& series, const std::string& title);

/// Error and estimator against dofs.
[[nodiscard]] std::vector<PlotSeries> study_series(const StudyRecord& study);

/// Least-squares slope of log y against log x.
[[nodiscard]] double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace plate
