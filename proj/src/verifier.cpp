#include "warplab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "warplab/errors.hpp"
#include "warplab/format.hpp"
#include "warplab/parallel.hpp"

namespace warplab {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

VerificationVerdict named_verdict(std::string name) {
  VerificationVerdict v;
  v.inequality = std::move(name);
  return v;
}

}  // namespace

GrowthReport growth_curves(const MeshedSubmanifold& M, const ModelSpace& model, const std::vector<double>& radii,
                           int threads, double monotone_tolerance) {
  if (model.dim != M.param_dim) {
    std::ostringstream os;
    os << "growth_curves: model dimension " << model.dim << " differs from submanifold dimension " << M.param_dim;
    throw DomainError(os.str());
  }
  const std::size_t n = radii.size();
  GrowthReport G;
  G.radii = radii;
  G.vol.assign(n, 0.0);
  G.area.assign(n, 0.0);
  G.f.assign(n, 0.0);
  G.g.assign(n, 0.0);
  G.isop_lhs.assign(n, nan);
  G.isop_rhs.assign(n, 0.0);
  G.empty.assign(n, false);
  G.monotone_tolerance = monotone_tolerance;

  std::vector<char> empty(n, 0);
  parallel_for(n, threads, [&](std::size_t k) {
    const double t = radii[k];
    const auto B = extrinsic_ball(M, t);
    const double vb = vol_ball(model, t);
    const double vs = vol_fiber(model, t);
    G.vol[k] = volume(B);
    G.area[k] = area(B);
    G.f[k] = G.vol[k] / vb;
    G.g[k] = G.area[k] / vs;
    G.isop_rhs[k] = vs / vb;
    if (B.empty() || G.vol[k] <= 0.0)
      empty[k] = 1;
    else
      G.isop_lhs[k] = G.area[k] / G.vol[k];
  });

  double prev = nan;
  for (std::size_t k = 0; k < n; ++k) {
    G.empty[k] = empty[k] != 0;
    if (G.empty[k]) {
      G.notes.push_back("D_t empty at t=" + format_double(radii[k]));
      continue;
    }
    if (!std::isnan(prev)) G.monotone_violation = std::max(G.monotone_violation, (prev - G.f[k]) / prev);
    prev = G.f[k];
  }
  G.monotone_f = G.monotone_violation <= monotone_tolerance;
  return G;
}

std::string to_string(HypothesisForm f) {
  switch (f) {
    case HypothesisForm::T1_c_eta_rho: return "T1_c_eta_rho";
    case HypothesisForm::T2_eps_over_wprime_sq: return "T2_eps_over_wprime_sq";
    case HypothesisForm::cor1_delta_exp: return "cor1_delta_exp";
    case HypothesisForm::cor3_eps_over_r: return "cor3_eps_over_r";
    case HypothesisForm::cor5_c_hb: return "cor5_c_hb";
    case HypothesisForm::cor6_c_over_rho: return "cor6_c_over_rho";
  }
  return "?";
}

const std::vector<HypothesisForm>& all_hypothesis_forms() {
  static const std::vector<HypothesisForm> forms{
      HypothesisForm::T1_c_eta_rho,    HypothesisForm::T2_eps_over_wprime_sq, HypothesisForm::cor1_delta_exp,
      HypothesisForm::cor3_eps_over_r, HypothesisForm::cor5_c_hb,             HypothesisForm::cor6_c_over_rho};
  return forms;
}

HypothesisForm parse_hypothesis_form(std::string_view tag) {
  for (auto f : all_hypothesis_forms())
    if (to_string(f) == tag) return f;
  throw std::invalid_argument("unknown hypothesis form '" + std::string(tag) + "'");
}

bool is_bound_form(HypothesisForm f) {
  return f == HypothesisForm::T1_c_eta_rho || f == HypothesisForm::cor5_c_hb || f == HypothesisForm::cor6_c_over_rho;
}

bool uses_rho(HypothesisForm f) { return is_bound_form(f); }

namespace {

bool inside_domain(const WarpingFunction& w, double r) { return r > 0.0 && r < w.domain_end(); }

}  // namespace

HypothesisFit check_hypothesis(const MeshedSubmanifold& M, const ModelSpace& model, HypothesisForm form,
                               const std::vector<double>& radii, const HypothesisParams& params) {
  HypothesisFit fit;
  fit.form = form;
  fit.radii = radii;
  fit.c = params.c;
  const auto& w = model.warping;
  const std::optional<double> b = params.b ? params.b : w.curvature();
  std::vector<std::string> notes;

  std::optional<WarpingFunction> hb;
  if (form == HypothesisForm::cor5_c_hb) hb = WarpingFunction::space_form(b.value_or(0.0));
  if (form == HypothesisForm::cor1_delta_exp && !(b && *b < 0.0)) {
    fit.applicable = false;
    notes.push_back("not applicable: requires a space form with b < 0");
  }

  // (variable, value) per vertex
  std::vector<std::pair<double, double>> samples;
  samples.reserve(M.vertices.size());
  std::size_t skipped = 0;
  for (std::size_t v = 0; v < M.vertices.size(); ++v) {
    const auto& vx = M.vertices[v];
    const double r = vx.r;
    const double rho = M.rho[v];
    const double B = vx.sff;
    double x = uses_rho(form) ? rho : r;
    double q = nan;
    switch (form) {
      case HypothesisForm::T1_c_eta_rho:
        if (rho > AmbientChart::pole_exclusion && inside_domain(w, rho)) {
          const double eta = w.d1(rho) / w.value(rho);
          if (eta > 0.0) q = B / eta;
        }
        break;
      case HypothesisForm::T2_eps_over_wprime_sq:
        if (r == 0.0 || inside_domain(w, r)) q = r == 0.0 ? 0.0 : B * w.value(r) * w.d1(r);
        break;
      case HypothesisForm::cor1_delta_exp:
        if (b && *b < 0.0) q = B * std::exp(2.0 * std::sqrt(-*b) * r);
        break;
      case HypothesisForm::cor3_eps_over_r: q = B * r; break;
      case HypothesisForm::cor5_c_hb:
        if (rho > AmbientChart::pole_exclusion && inside_domain(*hb, rho)) {
          const double h = hb->d1(rho) / hb->value(rho);
          if (h > 0.0) q = B / h;
        }
        break;
      case HypothesisForm::cor6_c_over_rho: q = B * rho; break;
    }
    if (std::isnan(q)) {
      ++skipped;
      continue;
    }
    samples.emplace_back(x, q);
  }
  if (skipped > 0) notes.push_back(std::to_string(skipped) + " vertices outside the form's domain skipped");
  std::sort(samples.begin(), samples.end());

  for (std::size_t v = 0; v < M.vertices.size(); ++v) {
    const double rho = M.rho[v];
    if (!inside_domain(w, rho) || rho <= AmbientChart::pole_exclusion) continue;
    const double d1 = w.d1(rho);
    if (d1 > 0.0) fit.a_r = std::max(fit.a_r, w.value(rho) / d1 * M.vertices[v].sff);
  }

  const std::size_t n = radii.size();
  fit.fitted_curve.assign(n, nan);
  if (n == 0) {
    fit.applicable = false;
    fit.notes = "no radii";
    return fit;
  }
  const double lo = radii.front();
  const double hi = radii.back();
  const int bins = std::max(1, params.bins);
  fit.bin_width = (hi - lo) / bins;
  fit.verified_lo = lo;
  fit.verified_hi = hi + fit.bin_width;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = radii[k];
    auto it = std::lower_bound(samples.begin(), samples.end(), std::make_pair(t, -inf));
    double sup = nan;
    for (; it != samples.end(); ++it) {
      if (fit.bin_width > 0.0 ? it->first >= t + fit.bin_width : it->first > t) break;
      sup = std::isnan(sup) ? it->second : std::max(sup, it->second);
    }
    fit.fitted_curve[k] = sup;
  }

  std::size_t filled = 0;
  fit.trend_decreasing = true;
  double prev = nan;
  for (double q : fit.fitted_curve) {
    if (std::isnan(q)) continue;
    ++filled;
    if (!std::isnan(prev) && q > prev + params.trend_tolerance * std::max(1.0, std::abs(prev)))
      fit.trend_decreasing = false;
    prev = q;
  }
  if (filled < n) notes.push_back(std::to_string(n - filled) + " empty windows skipped");
  if (filled == 0) {
    fit.applicable = false;
    notes.push_back("no samples in the verified range");
  }
  if (M.compact) {
    fit.applicable = false;
    notes.push_back("not applicable: compact");
  }

  // trailing run on which the bound (c for bound forms, 1/4 for decaying majorants) holds
  const double bound = is_bound_form(form) ? params.c : 0.25;
  std::optional<std::size_t> run_start;
  for (std::size_t k = n; k-- > 0;) {
    const double q = fit.fitted_curve[k];
    if (std::isnan(q)) continue;
    if (q > bound) break;
    run_start = k;
  }
  if (run_start) fit.R0 = radii[*run_start];
  if (is_bound_form(form)) {
    const bool long_enough = run_start && (hi > lo ? hi - radii[*run_start] >= params.window_fraction * (hi - lo) : true);
    fit.passes = fit.applicable && long_enough;
    if (!long_enough) notes.push_back("bound c=" + format_double(params.c) + " not held on the trailing window");
  } else {
    fit.passes = fit.applicable && fit.trend_decreasing;
  }

  for (std::size_t k = 0; k < notes.size(); ++k) fit.notes += (k ? "; " : "") + notes[k];
  return fit;
}

namespace {

std::string demonstration_note(int m) {
  if (m > 2) return {};
  return "demonstration: m = " + std::to_string(m) + " while the ends inequalities assume m > 2";
}

void join_note(std::string& notes, const std::string& extra) {
  if (extra.empty()) return;
  notes += notes.empty() ? extra : "; " + extra;
}

}  // namespace

std::vector<VerificationVerdict> ends_inequalities(const GrowthReport& G, const EndsScan& E,
                                                   const HypothesisFit& eps_fit, int m, bool compact,
                                                   const EndsTolerances& tol) {
  auto vol = named_verdict("volume_growth_ends");
  auto area = named_verdict("area_growth_ends");
  auto lim = named_verdict("area_growth_liminf");
  vol.tolerance = tol.volume_growth;
  area.tolerance = tol.area_growth;
  lim.tolerance = tol.area_growth;
  const double ends = E.stabilized_count ? *E.stabilized_count : nan;

  vol.margin = inf;
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k]) continue;
    vol.t.push_back(G.radii[k]);
    vol.lhs.push_back(G.f[k]);
    vol.rhs.push_back(ends);
    vol.margin = std::min(vol.margin, ends - G.f[k]);
  }

  area.margin = inf;
  std::size_t vacuous = 0;
  const double power = 0.5 * (m - 1);
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k]) continue;
    const double eps = k < eps_fit.fitted_curve.size() ? eps_fit.fitted_curve[k] : nan;
    if (std::isnan(eps) || eps >= 0.25) {
      ++vacuous;
      continue;
    }
    const double lhs = G.g[k] * std::pow(1.0 - 4.0 * eps, power);
    area.t.push_back(G.radii[k]);
    area.lhs.push_back(lhs);
    area.rhs.push_back(ends);
    area.margin = std::min(area.margin, ends - lhs);
  }
  if (vacuous > 0) area.notes = std::to_string(vacuous) + " radii vacuous (eps_hat >= 1/4 or unfitted)";

  lim.margin = inf;
  double min_g = inf;
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k] || G.radii[k] < E.window_lo || G.radii[k] > E.window_hi) continue;
    lim.t.push_back(G.radii[k]);
    lim.lhs.push_back(G.g[k]);
    lim.rhs.push_back(ends);
    min_g = std::min(min_g, G.g[k]);
  }
  if (std::isfinite(min_g)) lim.margin = ends - min_g;

  const std::string demo = demonstration_note(m);
  for (auto* v : {&vol, &area, &lim}) {
    if (!std::isfinite(v->margin)) v->margin = nan;
    if (compact) {
      join_note(v->notes, "hypotheses violated (compact)");
    } else if (!E.stabilized_count) {
      join_note(v->notes, "end count did not stabilize on the scanned range");
    } else if (v->t.empty()) {
      join_note(v->notes, v == &area ? "vacuous: eps_hat >= 1/4 at every sampled radius" : "no nonempty samples");
    } else {
      v->passed = v->margin >= -v->tolerance;
      join_note(v->notes, demo);
    }
  }
  return {vol, area, lim};
}

BishopMyers bishop_myers_bound(double t, double eps_hat, int m, const WarpingFunction& w) {
  BishopMyers out;
  if (std::isnan(eps_hat) || eps_hat >= 0.25) {
    out.vacuous = true;
    out.delta = nan;
    out.diameter_bound = inf;
    out.area_bound = inf;
    return out;
  }
  const double wt = w.value(t);
  out.delta = (1.0 - 4.0 * eps_hat) / (wt * wt);
  out.diameter_bound = std::numbers::pi / std::sqrt(out.delta);
  out.area_bound = unit_sphere_volume(m) / std::pow(out.delta, 0.5 * (m - 1));
  return out;
}

VerificationVerdict bishop_myers_verdict(const std::vector<double>& radii, const std::vector<double>& per_end_max,
                                         const std::vector<double>& eps_hat, int m, const WarpingFunction& w,
                                         double tolerance) {
  auto v = named_verdict("bishop_myers_area");
  v.tolerance = tolerance;
  v.margin = inf;
  std::size_t vacuous = 0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (std::isnan(per_end_max[k])) continue;
    const auto bm = bishop_myers_bound(radii[k], eps_hat[k], m, w);
    if (bm.vacuous) {
      ++vacuous;
      continue;
    }
    v.t.push_back(radii[k]);
    v.lhs.push_back(per_end_max[k]);
    v.rhs.push_back(bm.area_bound);
    v.margin = std::min(v.margin, (bm.area_bound - per_end_max[k]) / bm.area_bound);
  }
  if (vacuous > 0) v.notes = std::to_string(vacuous) + " radii vacuous (eps_hat >= 1/4 or unfitted)";
  if (v.t.empty()) {
    v.margin = nan;
    join_note(v.notes, "vacuous at every sampled radius");
  } else {
    v.passed = v.margin >= -tolerance;
  }
  return v;
}

GapDiagnostic gap_diagnostic(const GrowthReport& G, const EndsScan& E, bool minimal, double sup_sff,
                             double f_tolerance, double sff_tolerance) {
  GapDiagnostic d;
  d.sup_sff = sup_sff;
  bool f_is_one = false;
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k]) continue;
    f_is_one = true;
    if (std::abs(G.f[k] - 1.0) > f_tolerance) {
      f_is_one = false;
      break;
    }
  }
  if (!minimal) {
    d.verdict = "no verdict (not minimal)";
  } else if (E.stabilized_count != 1) {
    d.verdict = "no verdict (ends = " + (E.stabilized_count ? std::to_string(*E.stabilized_count) : "unstable") + ")";
  } else if (!f_is_one) {
    d.verdict = "no verdict (f differs from 1)";
  } else {
    d.triggered = true;
    if (sup_sff <= sff_tolerance) {
      d.verdict = "consistent with totally geodesic";
    } else {
      d.anomaly = true;
      d.verdict = "anomaly: f = 1 within tolerance but sup |B| = " + format_double(sup_sff);
    }
  }
  return d;
}

VerificationVerdict isoperimetric_verdict(const GrowthReport& G, double tolerance) {
  auto v = named_verdict("isoperimetric");
  v.tolerance = tolerance;
  v.margin = inf;
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k]) continue;
    v.t.push_back(G.radii[k]);
    v.lhs.push_back(G.isop_lhs[k]);
    v.rhs.push_back(G.isop_rhs[k]);
    v.margin = std::min(v.margin, (G.isop_lhs[k] - G.isop_rhs[k]) / G.isop_rhs[k]);
  }
  v.notes = "relative margin";
  if (v.t.empty()) {
    v.margin = nan;
    join_note(v.notes, "no nonempty samples");
  } else {
    v.passed = v.margin >= -tolerance;
  }
  return v;
}

VerificationVerdict volume_comparison_verdict(const GrowthReport& G, double tolerance) {
  auto v = named_verdict("volume_comparison");
  v.tolerance = tolerance;
  v.margin = inf;
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k]) continue;
    v.t.push_back(G.radii[k]);
    v.lhs.push_back(G.f[k]);
    v.rhs.push_back(1.0);
    v.margin = std::min(v.margin, G.f[k] - 1.0);
  }
  if (v.t.empty()) {
    v.margin = nan;
    v.notes = "no nonempty samples";
  } else {
    v.passed = v.margin >= -tolerance;
  }
  return v;
}

VerificationVerdict monotonicity_verdict(const GrowthReport& G) {
  auto v = named_verdict("monotone_volume_growth");
  v.tolerance = G.monotone_tolerance;
  for (std::size_t k = 0; k < G.radii.size(); ++k) {
    if (G.empty[k]) continue;
    v.t.push_back(G.radii[k]);
    v.lhs.push_back(G.f[k]);
  }
  v.margin = -G.monotone_violation;
  v.notes = "margin is minus the largest relative decrease of f";
  v.passed = G.monotone_f;
  return v;
}

}  // namespace warplab
