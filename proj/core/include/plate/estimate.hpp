#pragma once

#include "plate/assembly.hpp"
#include "plate/source.hpp"
#include "plate/spaces.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace plate {

/// Squared local contributions with their sum.
struct Indicator {
  std::vector<double> values;
  double total = 0.0;
};

[[nodiscard]] Indicator make_indicator(std::vector<double> values);

/// Squared edge jump terms of a piecewise function; boundary edges use the trace.
struct JumpTerms {
  std::vector<double> hessian_tau;  // h_E ||[D^2 v] tau_E||^2
  std::vector<double> jh;           // j_h(v, v) edge parts
  std::vector<double> value;        // h_E^-3 ||[v]||^2
  std::vector<double> normal;       // h_E^-1 ||[dv/dnu]||^2
  std::vector<double> nn;           // h_E ||[d^2 v/dnu^2]||^2, interior edges only
};

[[nodiscard]] JumpTerms jump_terms(const Mesh& mesh, const PiecewiseFunction& v);

/// Per edge h_E ||[D^2 v] tau_E||^2 + j_h edge part.
[[nodiscard]] Indicator jump_estimator_A(const Mesh& mesh, const PiecewiseFunction& v);
/// Per edge h_E^-3 ||[v]||^2 + h_E^-1 ||[dv/dnu]||^2.
[[nodiscard]] Indicator jump_estimator_B(const Mesh& mesh, const PiecewiseFunction& v);
/// Per edge h_E ||[d^2 v/dnu^2]||^2 (zero on boundary edges).
[[nodiscard]] Indicator nn_jump_estimator(const Mesh& mesh, const PiecewiseFunction& v);

/// Elementwise ||h_T^2 f||^2 and ||h_T^2 (f - Pi_k f)||^2.
struct VolumeOsc {
  Indicator volume;
  Indicator osc;
};
[[nodiscard]] VolumeOsc volume_and_osc(const Mesh& mesh, const ScalarField& f, int k = 2);

/// Which mu_3 branch applies: I_h = id (Morley, dG, WOPSIP) or I_h = I_C (C0IP).
enum class TransferKind { Identity, C0 };
[[nodiscard]] TransferKind transfer_of(Scheme s) noexcept;

struct MuTerms {
  Indicator mu1;  // per element
  Indicator mu2;  // per edge, zero on boundary edges
  Indicator mu3;  // per edge, zero on boundary edges
  [[nodiscard]] double total() const { return mu1.total + mu2.total + mu3.total; }
};

/// Residual estimator of piecewise polynomial data. u_h enters only the I_C branch
/// of mu_3 and may be null otherwise (or to drop it).
[[nodiscard]] MuTerms general_mu(const Mesh& mesh, const SourceApproximation& data, const PiecewiseFunction* u_h,
                                 TransferKind branch);

/// Elementwise data approximation error apx(F, T)^2; line-load edges count once
/// for each adjacent triangle.
[[nodiscard]] Indicator apx_error(const Mesh& mesh, const SourceSpec& source, const SourceApproximation& data);

/// mu for a piecewise polynomial functional (Lambda_0, Lambda_1, Lambda_2) with u_h = 0.
[[nodiscard]] MuTerms functional_dualnorm(const Mesh& mesh, const SourceApproximation& lambda, TransferKind branch);

/// Everything the a posteriori bounds need for one discrete solution.
struct EstimatorReport {
  Scheme scheme = Scheme::Morley;
  Smoother smoother = Smoother::Identity;
  bool l2_source = false;  // source is a plain f0

  JumpTerms jumps;
  VolumeOsc volume;  // only for l2_source
  MuTerms mu;
  Indicator apx;
  double penalty = 0.0;  // c_dG / c_IP / c_P (u_h, u_h)

  double family_a = 0.0;  // jump part of the first family (incl. nn for C0IP in the L2 bound)
  double family_b = 0.0;  // jump part of the second family
  double l2_a = 0.0, l2_b = 0.0;            // ||h^2 f||^2 + family (L2 source only)
  double general_a = 0.0, general_b = 0.0;  // mu^2 + family + apx^2

  /// Named squared totals in a stable order.
  std::vector<std::pair<std::string, double>> totals;

  /// Squared total used for reporting and marking: the L2 bound for L2 sources, else the general one.
  [[nodiscard]] double primary() const { return l2_source ? l2_a : general_a; }
  /// Per-element squared indicators of primary(); edge terms split equally between neighbours.
  [[nodiscard]] std::vector<double> element_indicators(const Mesh& mesh) const;
};

/// Estimates for u_h solving the configured scheme. With Q = id and a source that
/// is not a plain f0 the data assumptions are checked and DataAssumptionError thrown.
[[nodiscard]] EstimatorReport scheme_estimate(const DiscreteField& u_h, const SchemeConfig& config,
                                              const SourceSpec& source, const ApproximationDegrees& degrees = {});

/// |||u - u_h|||_pw and ||u - u_h||_h against an exact solution.
struct EnergyError {
  double pw = 0.0;
  double h = 0.0;
};
[[nodiscard]] EnergyError energy_error(const PiecewiseFunction& exact, const DiscreteField& u_h);

/// CSV rows `level,scheme,estimator_name,total,error_energy,efficiency_index`
/// (totals as square roots).
struct EstimatorRow {
  int level;
  std::string scheme;
  std::string name;
  double total;
  double error;
};
void write_estimator_csv(std::ostream& os, const std::vector<EstimatorRow>& rows);
void write_entity_csv(std::ostream& os, const std::vector<double>& values);

}  // namespace plate
