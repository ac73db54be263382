#include "plate/estimate.hpp"

#include "plate/errors.hpp"
#include "plate/parallel.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

namespace plate {

Indicator make_indicator(std::vector<double> values) {
  Indicator r;
  r.total = std::accumulate(values.begin(), values.end(), 0.0);
  r.values = std::move(values);
  return r;
}

namespace {

template <class Body>
void for_each_index(int n, const Body& body) {
  parallel_chunks(static_cast<std::size_t>(n), [&](int, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(static_cast<int>(i));
  });
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

JumpTerms jump_terms(const Mesh& mesh, const PiecewiseFunction& v) {
  const int ne = mesh.num_edges();
  JumpTerms j;
  j.hessian_tau.assign(ne, 0.0);
  j.value.assign(ne, 0.0);
  j.normal.assign(ne, 0.0);
  j.nn.assign(ne, 0.0);
  for_each_index(ne, [&](int e) {
    const Edge& E = mesh.edge(e);
    const double h = E.length;
    const EdgeSamples s = edge_jumps(mesh, v, e, 6);
    double ht = 0.0, val = 0.0, nor = 0.0, nn = 0.0;
    for (std::size_t k = 0; k < s.rule.w.size(); ++k) {
      const double w = s.rule.w[k];
      ht += w * (s.hess_jump[k] * E.tangent).squaredNorm();
      val += w * s.value_jump[k] * s.value_jump[k];
      nor += w * s.normal_jump[k] * s.normal_jump[k];
      const double d = E.normal.dot(s.hess_jump[k] * E.normal);
      nn += w * d * d;
    }
    j.hessian_tau[e] = h * ht;
    j.value[e] = val / (h * h * h);
    j.normal[e] = nor / h;
    j.nn[e] = E.boundary() ? 0.0 : h * nn;
  });
  j.jh = jh_edge_terms(mesh, v);
  return j;
}

Indicator jump_estimator_A(const Mesh& mesh, const PiecewiseFunction& v) {
  JumpTerms j = jump_terms(mesh, v);
  for (std::size_t e = 0; e < j.jh.size(); ++e) j.hessian_tau[e] += j.jh[e];
  return make_indicator(std::move(j.hessian_tau));
}

Indicator jump_estimator_B(const Mesh& mesh, const PiecewiseFunction& v) {
  JumpTerms j = jump_terms(mesh, v);
  for (std::size_t e = 0; e < j.value.size(); ++e) j.value[e] += j.normal[e];
  return make_indicator(std::move(j.value));
}

Indicator nn_jump_estimator(const Mesh& mesh, const PiecewiseFunction& v) {
  return make_indicator(jump_terms(mesh, v).nn);
}

VolumeOsc volume_and_osc(const Mesh& mesh, const ScalarField& f, int k) {
  const int nt = mesh.num_triangles();
  std::vector<double> vol(nt, 0.0), osc(nt, 0.0);
  if (f) {
    for_each_index(nt, [&](int t) {
      const double h4 = std::pow(mesh.diameter(t), 4);
      const Polynomial p = project_element(mesh, t, f, k);
      const ElementRule r = element_rule(mesh, t, 10);
      double a = 0.0, b = 0.0;
      for (std::size_t q = 0; q < r.w.size(); ++q) {
        const double fx = f(r.x[q]);
        const double d = fx - p.value(r.x[q]);
        a += r.w[q] * fx * fx;
        b += r.w[q] * d * d;
      }
      vol[t] = h4 * a;
      osc[t] = h4 * b;
    });
  }
  return {make_indicator(std::move(vol)), make_indicator(std::move(osc))};
}

TransferKind transfer_of(Scheme s) noexcept { return s == Scheme::C0IP ? TransferKind::C0 : TransferKind::Identity; }

namespace {

// F1 - div F2 - d(F2 tau)/ds and F2 at x for the data of triangle t.
struct EdgeData {
  Eigen::Vector2d flux;
  Eigen::Matrix2d f2;
};

EdgeData edge_data(const SourceApproximation& d, int t, const Point& x, const Point& tau) {
  const Jet a = d.F2[t][0].jet(x), b = d.F2[t][1].jet(x), c = d.F2[t][2].jet(x);
  EdgeData out;
  out.f2 << a.value, b.value, b.value, c.value;
  const Eigen::Vector2d div(a.grad.x() + b.grad.y(), b.grad.x() + c.grad.y());
  Eigen::Matrix2d dtau;
  dtau << a.grad.dot(tau), b.grad.dot(tau), b.grad.dot(tau), c.grad.dot(tau);
  const Eigen::Vector2d f1(d.F1[t][0].value(x), d.F1[t][1].value(x));
  out.flux = f1 - div - dtau * tau;
  return out;
}

}  // namespace

MuTerms general_mu(const Mesh& mesh, const SourceApproximation& data, const PiecewiseFunction* u_h,
                   TransferKind branch) {
  const int nt = mesh.num_triangles(), ne = mesh.num_edges();
  if (static_cast<int>(data.F0.size()) != nt || static_cast<int>(data.G0.size()) != ne)
    throw Error("general_mu: data does not match the mesh");
  std::vector<double> mu1(nt, 0.0), mu2(ne, 0.0), mu3(ne, 0.0);
  for_each_index(nt, [&](int t) {
    const ElementRule r = element_rule(mesh, t, 10);
    double s = 0.0;
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const Point& x = r.x[q];
      const double div1 = data.F1[t][0].jet(x).grad.x() + data.F1[t][1].jet(x).grad.y();
      const double div2 = data.F2[t][0].jet(x).hess(0, 0) + 2.0 * data.F2[t][1].jet(x).hess(0, 1) +
                          data.F2[t][2].jet(x).hess(1, 1);
      const double v = data.F0[t].value(x) - div1 + div2;
      s += r.w[q] * v * v;
    }
    mu1[t] = std::pow(mesh.diameter(t), 4) * s;
  });
  for_each_index(ne, [&](int e) {
    const Edge& E = mesh.edge(e);
    if (E.boundary()) return;
    const double h = E.length;
    const EdgeRule r = edge_rule(mesh, e, 9);
    const std::size_t n = r.w.size();
    std::vector<double> arg3(n);
    double s2 = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const Point& x = r.x[q];
      const EdgeData p = edge_data(data, E.t_plus, x, E.tangent);
      const EdgeData m = edge_data(data, E.t_minus, x, E.tangent);
      const double a2 = data.G0[e].value(r.t[q]) + (p.flux - m.flux).dot(E.normal);
      s2 += r.w[q] * a2 * a2;
      Eigen::Matrix2d jump = p.f2 - m.f2;
      if (branch == TransferKind::C0 && u_h)
        jump -= u_h->eval(E.t_plus, x).hess - u_h->eval(E.t_minus, x).hess;
      arg3[q] = data.G1[e].value(r.t[q]) + E.normal.dot(jump * E.normal);
    }
    double mean = 0.0;
    if (branch == TransferKind::Identity) {
      for (std::size_t q = 0; q < n; ++q) mean += r.w[q] * arg3[q];
      mean /= h;
    }
    double s3 = 0.0;
    for (std::size_t q = 0; q < n; ++q) s3 += r.w[q] * (arg3[q] - mean) * (arg3[q] - mean);
    mu2[e] = h * h * h * s2;
    mu3[e] = h * s3;
  });
  return {make_indicator(std::move(mu1)), make_indicator(std::move(mu2)), make_indicator(std::move(mu3))};
}

MuTerms functional_dualnorm(const Mesh& mesh, const SourceApproximation& lambda, TransferKind branch) {
  return general_mu(mesh, lambda, nullptr, branch);
}

Indicator apx_error(const Mesh& mesh, const SourceSpec& source, const SourceApproximation& data) {
  const int nt = mesh.num_triangles();
  std::vector<double> apx(nt, 0.0);
  for_each_index(nt, [&](int t) {
    const double h = mesh.diameter(t);
    const ElementRule r = element_rule(mesh, t, 10);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const Point& x = r.x[q];
      const double d0 = (source.f0 ? source.f0(x) : 0.0) - data.F0[t].value(x);
      const Eigen::Vector2d f1 = source.f1 ? source.f1(x) : Eigen::Vector2d::Zero();
      const Eigen::Matrix2d f2 = source.f2 ? source.f2(x) : Eigen::Matrix2d::Zero();
      const double d1x = f1.x() - data.F1[t][0].value(x), d1y = f1.y() - data.F1[t][1].value(x);
      // f_(1,1) = 2 (f2)_xy
      const double d20 = f2(0, 0) - data.F2[t][0].value(x);
      const double d11 = 2.0 * (f2(0, 1) - data.F2[t][1].value(x));
      const double d02 = f2(1, 1) - data.F2[t][2].value(x);
      s0 += r.w[q] * d0 * d0;
      s1 += r.w[q] * (d1x * d1x + d1y * d1y);
      s2 += r.w[q] * (d20 * d20 + d11 * d11 + d02 * d02);
    }
    apx[t] = std::pow(h, 4) * s0 + h * h * s1 + s2;
  });

  const ResolvedLoads loads = resolve_loads(mesh, source);
  for (int order = 0; order < 2; ++order) {
    std::vector<std::vector<const ScalarField*>> per_edge(mesh.num_edges());
    for (const auto& l : loads.edges)
      if (l.order == order) per_edge[l.edge].push_back(&l.g);
    const auto& G = order == 0 ? data.G0 : data.G1;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (per_edge[e].empty()) continue;
      const Edge& E = mesh.edge(e);
      const EdgeRule r = edge_rule(mesh, e, 9);
      double s = 0.0;
      for (std::size_t q = 0; q < r.w.size(); ++q) {
        double g = 0.0;
        for (const ScalarField* f : per_edge[e]) g += (*f)(r.x[q]);
        const double d = g - G[e].value(r.t[q]);
        s += r.w[q] * d * d;
      }
      const double c = std::pow(E.length, 3 - 2 * order) * s;
      apx[E.t_plus] += c;
      if (!E.boundary()) apx[E.t_minus] += c;
    }
  }
  return make_indicator(std::move(apx));
}

EstimatorReport scheme_estimate(const DiscreteField& u, const SchemeConfig& cfg, const SourceSpec& source,
                                const ApproximationDegrees& degrees) {
  const Mesh& mesh = u.mesh();
  EstimatorReport r;
  r.scheme = cfg.scheme;
  r.smoother = cfg.smoother;
  r.l2_source = !source.f1 && !source.f2 && source.lines.empty() && source.points.empty();

  const SourceApproximation data = approximate_source(mesh, source, degrees);
  if (cfg.smoother == Smoother::Identity)
    require_unsmoothed_assumptions(data, cfg.scheme == Scheme::C0IP ? UnsmoothedFamily::C0InteriorPenalty
                                                                     : UnsmoothedFamily::NonconformingP2);

  r.jumps = jump_terms(mesh, u);
  if (r.l2_source) r.volume = volume_and_osc(mesh, source.f0, 2);
  r.mu = general_mu(mesh, data, &u, transfer_of(cfg.scheme));
  r.apx = apx_error(mesh, source, data);
  r.penalty = penalty_energy(u, cfg);

  const double ht = sum(r.jumps.hessian_tau), jh = sum(r.jumps.jh);
  const double val = sum(r.jumps.value), nor = sum(r.jumps.normal), nn = sum(r.jumps.nn);
  const bool c0 = cfg.scheme == Scheme::C0IP;
  r.family_a = ht + jh;
  r.family_b = val + nor;
  r.general_a = r.mu.total() + r.family_a + r.apx.total;
  r.general_b = r.mu.total() + r.family_b + r.apx.total;
  if (r.l2_source) {
    const double vol = r.volume.volume.total;
    r.l2_a = vol + r.family_a + (c0 ? nn : 0.0);
    r.l2_b = vol + (c0 ? nor + nn : r.family_b);
    r.totals.emplace_back("l2_a", r.l2_a);
    r.totals.emplace_back("l2_b", r.l2_b);
    if (cfg.scheme != Scheme::Morley) r.totals.emplace_back("l2_penalty", vol + r.penalty);
    r.totals.emplace_back("osc", r.volume.osc.total);
  }
  r.totals.emplace_back("general_a", r.general_a);
  r.totals.emplace_back("general_b", r.general_b);
  r.totals.emplace_back("family_a", r.family_a);
  r.totals.emplace_back("family_b", r.family_b);
  r.totals.emplace_back("mu", r.mu.total());
  r.totals.emplace_back("apx", r.apx.total);
  return r;
}

std::vector<double> EstimatorReport::element_indicators(const Mesh& mesh) const {
  std::vector<double> eta(mesh.num_triangles(), 0.0);
  const bool c0 = scheme == Scheme::C0IP;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    eta[t] = l2_source ? volume.volume.values[t] : mu.mu1.values[t] + apx.values[t];
  for (int e = 0; e < mesh.num_edges(); ++e) {
    double v = jumps.hessian_tau[e] + jumps.jh[e];
    if (l2_source) {
      if (c0) v += jumps.nn[e];
    } else {
      v += mu.mu2.values[e] + mu.mu3.values[e];
    }
    const Edge& E = mesh.edge(e);
    if (E.boundary()) {
      eta[E.t_plus] += v;
    } else {
      eta[E.t_plus] += 0.5 * v;
      eta[E.t_minus] += 0.5 * v;
    }
  }
  return eta;
}

EnergyError energy_error(const PiecewiseFunction& exact, const DiscreteField& u) {
  EnergyError err;
  err.pw = energy_distance(u.mesh(), exact, u, 10);
  err.h = std::sqrt(err.pw * err.pw + std::max(0.0, jh_product(u.mesh(), u, u)));
  return err;
}

void write_estimator_csv(std::ostream& os, const std::vector<EstimatorRow>& rows) {
  os << "level,scheme,estimator_name,total,error_energy,efficiency_index\n";
  os << std::setprecision(12);
  for (const auto& r : rows) {
    const double eff = r.error > 0.0 ? r.total / r.error : std::numeric_limits<double>::quiet_NaN();
    os << r.level << ',' << r.scheme << ',' << r.name << ',' << r.total << ',' << r.error << ',' << eff << '\n';
  }
}

void write_entity_csv(std::ostream& os, const std::vector<double>& values) {
  os << "entity_id,value\n" << std::setprecision(12);
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << values[i] << '\n';
}

}  // namespace plate
