#include "plate/adapt.hpp"

#include "plate/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace plate {

std::vector<int> mark_doerfler(std::span<const double> eta, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error("Doerfler parameter must lie in (0, 1]");
  if (eta.empty()) throw Error("mark_doerfler: empty indicator set");
  std::vector<int> order;
  double total = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] < 0.0 || !std::isfinite(eta[i])) throw Error("mark_doerfler: indicators must be finite and >= 0");
    if (eta[i] > 0.0) order.push_back(static_cast<int>(i));
    total += eta[i];
  }
  if (total == 0.0) return {};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta[a] > eta[b]; });
  if (theta < 1.0) {
    double acc = 0.0;
    std::size_t n = 0;
    while (n < order.size() && acc < theta * total) acc += eta[order[n++]];
    order.resize(n);
  }
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<double> edge_to_elements(const Mesh& mesh, std::span<const double> values) {
  std::vector<double> out(mesh.num_triangles(), 0.0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& E = mesh.edge(e);
    if (E.boundary()) {
      out[E.t_plus] += values[e];
    } else {
      out[E.t_plus] += 0.5 * values[e];
      out[E.t_minus] += 0.5 * values[e];
    }
  }
  return out;
}

LevelRecord evaluate_level(const std::shared_ptr<const Mesh>& mesh, const LoopOptions& opt, int level,
                           EstimatorReport* report_out) {
  const auto start = std::chrono::steady_clock::now();
  LevelRecord rec;
  rec.level = level;
  rec.ntriangles = mesh->num_triangles();
  rec.hmax = mesh->max_diameter();
  const Solution sol = [&] {
    try {
      return solve_problem(mesh, opt.scheme, opt.source);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("[solve] ") + e.what());
    }
  }();
  rec.ndof = sol.dofmap->size();
  EstimatorReport rep = [&] {
    try {
      return scheme_estimate(sol.field, opt.scheme, opt.source, opt.degrees);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("[estimate] ") + e.what());
    }
  }();
  if (rep.l2_source) {
    rec.est_a = std::sqrt(rep.l2_a);
    rec.est_b = std::sqrt(rep.l2_b);
    rec.osc = std::sqrt(rep.volume.osc.total);
  } else {
    rec.est_a = std::sqrt(rep.general_a);
    rec.est_b = std::sqrt(rep.general_b);
  }
  rec.est_theorem = std::sqrt(rep.primary());
  rec.apx = std::sqrt(rep.apx.total);
  if (opt.exact) {
    const EnergyError err = energy_error(*opt.exact, sol.field);
    rec.err_pw = err.pw;
    rec.err_h = err.h;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report_out) *report_out = std::move(rep);
  return rec;
}

StudyRecord adaptive_loop(const std::shared_ptr<const Mesh>& initial, const LoopOptions& opt) {
  opt.scheme.validate();
  StudyRecord study;
  study.scheme = opt.scheme.scheme;
  study.label = opt.uniform ? "uniform" : "adaptive";
  std::shared_ptr<const Mesh> mesh = initial;
  for (int level = 0; level < opt.max_levels; ++level) {
    EstimatorReport rep;
    const LevelRecord rec = evaluate_level(mesh, opt, level, &rep);
    study.levels.push_back(rec);
    if (rec.est_theorem <= opt.tolerance || rec.ndof >= opt.max_dofs || level + 1 == opt.max_levels) break;
    if (opt.uniform) {
      mesh = std::make_shared<const Mesh>(refine_uniform(*mesh));
      continue;
    }
    const std::vector<int> marked = mark_doerfler(rep.element_indicators(*mesh), opt.theta);
    if (marked.empty()) break;
    mesh = std::make_shared<const Mesh>(refine_bisect(*mesh, marked));
  }
  return study;
}

}  // namespace plate
