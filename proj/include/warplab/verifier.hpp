#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warplab/model_space.hpp"
#include "warplab/topology.hpp"

namespace warplab {

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> vol;   // Vol(D_t)
  std::vector<double> area;  // Vol(boundary D_t)
  std::vector<double> f;     // Vol(D_t) / Vol(B_t^w)
  std::vector<double> g;     // Vol(boundary D_t) / Vol(S_t^w)
  std::vector<double> isop_lhs;  // NaN where D_t is empty
  std::vector<double> isop_rhs;
  std::vector<bool> empty;
  bool monotone_f = true;
  double monotone_violation = 0.0;  // largest relative decrease of f between samples
  double monotone_tolerance = 1e-3;
  std::vector<std::string> notes;
};

/// Requires model.dim == mesh parameter dimension (DomainError otherwise).
GrowthReport growth_curves(const MeshedSubmanifold& M, const ModelSpace& model, const std::vector<double>& radii,
                           int threads = 1, double monotone_tolerance = 1e-3);

enum class HypothesisForm {
  T1_c_eta_rho,           // |B| <= c eta_w(rho)
  T2_eps_over_wprime_sq,  // |B| <= eps(r) eta_w(r) / w'(r)^2, fitted eps = |B| w w'
  cor1_delta_exp,         // |B| <= delta(r) / exp(2 sqrt(-b) r)
  cor3_eps_over_r,        // |B| <= eps(r) / r
  cor5_c_hb,              // |B| <= c h_b(rho)
  cor6_c_over_rho,        // |B| <= c / rho
};

std::string to_string(HypothesisForm f);
/// Throws std::invalid_argument on unknown tags.
HypothesisForm parse_hypothesis_form(std::string_view tag);
const std::vector<HypothesisForm>& all_hypothesis_forms();
/// Bound forms compare against c; the others fit a majorant that should decay to 0.
bool is_bound_form(HypothesisForm f);
/// Forms normalized by the intrinsic distance rho instead of r.
bool uses_rho(HypothesisForm f);

struct HypothesisParams {
  double c = 0.5;
  int bins = 20;
  /// Curvature of the comparison space form for cor5_c_hb and cor1_delta_exp; defaults to the
  /// ambient curvature when the ambient is a space form.
  std::optional<double> b;
  double window_fraction = 0.3;
  double trend_tolerance = 1e-9;
};

struct HypothesisFit {
  HypothesisForm form = HypothesisForm::cor3_eps_over_r;
  std::vector<double> radii;
  /// sup of the normalized quantity over vertices with r (or rho) in [t, t + width); NaN
  /// for empty windows.
  std::vector<double> fitted_curve;
  double bin_width = 0.0;
  double c = 0.0;
  bool applicable = true;
  bool passes = false;
  double verified_lo = 0.0;
  double verified_hi = 0.0;
  bool trend_decreasing = false;
  /// Smallest sampled radius from which the bound holds on the remaining range.
  std::optional<double> R0;
  /// sup over vertices of (w / w')(rho) |B|.
  double a_r = 0.0;
  std::string notes;
};

HypothesisFit check_hypothesis(const MeshedSubmanifold& M, const ModelSpace& model, HypothesisForm form,
                               const std::vector<double>& radii, const HypothesisParams& params = {});

struct VerificationVerdict {
  std::string inequality;
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double margin = 0.0;
  /// Empty when the verdict is not applicable (vacuous, compact, unstable ends).
  std::optional<bool> passed;
  double tolerance = 0.0;
  std::string notes;
};

struct EndsTolerances {
  double volume_growth = 1e-2;
  double area_growth = 2e-2;
};

/// Volume-growth, area-growth and liminf verdicts against the stabilized end count.
/// `eps_fit` supplies eps_hat(t) on the same radii as `G`.
std::vector<VerificationVerdict> ends_inequalities(const GrowthReport& G, const EndsScan& E,
                                                   const HypothesisFit& eps_fit, int m, bool compact,
                                                   const EndsTolerances& tol = {});

struct BishopMyers {
  bool vacuous = false;
  double delta = 0.0;
  double diameter_bound = 0.0;
  double area_bound = 0.0;
};

/// delta = (1 - 4 eps_hat) / w(t)^2, diameter pi / sqrt(delta), area V0(m) / delta^((m-1)/2).
/// Vacuous when eps_hat >= 1/4.
BishopMyers bishop_myers_bound(double t, double eps_hat, int m, const WarpingFunction& w);

struct GapDiagnostic {
  bool triggered = false;
  bool anomaly = false;
  double sup_sff = 0.0;
  std::string verdict;
};

/// Largest per-end boundary area at each radius against the bound computed from eps_hat(t).
/// `per_end_max` holds NaN where the ball has no boundary. The margin is relative to the bound.
VerificationVerdict bishop_myers_verdict(const std::vector<double>& radii, const std::vector<double>& per_end_max,
                                         const std::vector<double>& eps_hat, int m, const WarpingFunction& w,
                                         double tolerance);

GapDiagnostic gap_diagnostic(const GrowthReport& G, const EndsScan& E, bool minimal, double sup_sff,
                             double f_tolerance = 1e-2, double sff_tolerance = 1e-8);

/// Vol(boundary D_t)/Vol(D_t) >= Vol(S_t)/Vol(B_t) with a relative tolerance.
VerificationVerdict isoperimetric_verdict(const GrowthReport& G, double tolerance);
/// f(t) >= 1 - tolerance.
VerificationVerdict volume_comparison_verdict(const GrowthReport& G, double tolerance);
VerificationVerdict monotonicity_verdict(const GrowthReport& G);

}  // namespace warplab
