#include "plate/study.hpp"

#include "plate/errors.hpp"
#include "plate/manufactured.hpp"
#include "plate/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace plate {

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output);
  const auto path = std::filesystem::path(cfg.output) / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void log_level(std::ostream* log, const LevelRecord& l) {
  if (!log) return;
  *log << std::setprecision(4) << "level " << l.level << "  ndof " << l.ndof << "  hmax " << l.hmax;
  if (l.err_h >= 0.0) *log << "  err " << l.err_pw << " (pw) " << l.err_h << " (h)";
  *log << "  est " << l.est_theorem << "  [" << l.seconds << " s]\n";
}

}  // namespace

LoopOptions loop_options(const RunConfig& cfg) {
  LoopOptions o;
  o.scheme = cfg.scheme;
  o.source = make_source(cfg.source);
  o.degrees = cfg.degrees;
  o.theta = cfg.theta;
  o.max_dofs = cfg.max_dofs;
  o.uniform = cfg.kind == StudyKind::Uniform;
  o.max_levels = o.uniform ? cfg.levels : 40;
  if (cfg.source.id == "manufactured") {
    if (cfg.domain != "square") throw ConfigError("the manufactured source needs domain = square");
    o.exact = manufactured_square().u;
  }
  return o;
}

StudyRecord run_study(const RunConfig& cfg, std::ostream* log) {
  LoopOptions opt = loop_options(cfg);
  if (opt.uniform) opt.max_dofs = std::numeric_limits<int>::max();
  const StudyRecord s = adaptive_loop(make_mesh(cfg), opt);
  for (const auto& l : s.levels) log_level(log, l);
  std::ofstream csv = open_output(cfg, "study.csv");
  write_study_csv(csv, s);
  if (cfg.svg) {
    std::ofstream svg = open_output(cfg, "study.svg");
    write_svg(svg, study_series(s), std::string(to_string(cfg.scheme.scheme)) + " " + s.label);
  }
  return s;
}

LevelRecord run_solve(const RunConfig& cfg, std::ostream* log) {
  const LoopOptions opt = loop_options(cfg);
  const auto mesh = make_mesh(cfg);
  EstimatorReport rep;
  const LevelRecord rec = evaluate_level(mesh, opt, 0, &rep);
  log_level(log, rec);
  const double err = rec.error(cfg.scheme.scheme);
  std::vector<EstimatorRow> rows;
  for (const auto& [name, total] : rep.totals)
    rows.push_back({0, to_string(cfg.scheme.scheme), name, std::sqrt(std::max(0.0, total)), err});
  std::ofstream csv = open_output(cfg, "estimators.csv");
  write_estimator_csv(csv, rows);
  std::ofstream eta = open_output(cfg, "indicators.csv");
  write_entity_csv(eta, rep.element_indicators(*mesh));
  return rec;
}

}  // namespace plate
