#include "warplab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "warplab/errors.hpp"
#include "warplab/expression.hpp"
#include "warplab/format.hpp"

namespace warplab {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template <class Body>
void stage(std::vector<StageTiming>& timings, const std::string& name, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const ConfigError& e) {
    throw StageError(name, 2, e.what());
  } catch (const std::exception& e) {
    throw StageError(name, 3, e.what());
  }
  timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
}

void add_note(std::string& notes, const std::string& extra) { notes += notes.empty() ? extra : "; " + extra; }

}  // namespace

bool ScenarioResult::has_failures() const {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.passed == false; });
}

ParametricImmersion build_immersion(const ScenarioConfig& cfg) {
  const AmbientChart ambient(ModelSpace::make(cfg.ambient_dim, WarpingFunction::parse(cfg.warping)));
  const int m = cfg.model_dim;
  if (!cfg.builtin.empty()) {
    auto I = builtin_example(cfg.builtin, cfg.params, ambient);
    if (I.param_dim() != m)
      throw ConfigError("[model] dim", "builtin " + cfg.builtin + " has dimension " + std::to_string(I.param_dim()) +
                                           ", model dim is " + std::to_string(m));
    auto domain = I.domain();
    bool changed = false;
    for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
      if (!cfg.axes[k]) continue;
      domain[k] = *cfg.axes[k];
      changed = true;
    }
    if (changed) I.set_domain(domain);
    I.with_fd_step(cfg.fd_step);
    if (cfg.compact) I.set_compact(true);
    return I;
  }

  std::vector<std::string> vars;
  for (int k = 1; k <= m; ++k) vars.push_back("u" + std::to_string(k));
  std::vector<Expression> components;
  for (std::size_t k = 0; k < cfg.chart.size(); ++k) {
    try {
      components.push_back(Expression::parse(cfg.chart[k], vars));
    } catch (const ConfigError& e) {
      throw ConfigError("[immersion] chart component " + std::to_string(k + 1), e.what());
    }
  }
  std::vector<ParamAxis> domain;
  for (const auto& ax : cfg.axes) domain.push_back(*ax);
  auto chart = [components](const Vec& u) {
    Vec x(static_cast<Eigen::Index>(components.size()));
    const std::span<const double> args(u.data(), static_cast<std::size_t>(u.size()));
    for (std::size_t k = 0; k < components.size(); ++k) x[static_cast<Eigen::Index>(k)] = components[k].eval(args);
    return x;
  };
  ParametricImmersion I(cfg.name.empty() ? "custom" : cfg.name, ambient, domain, chart);
  I.with_fd_step(cfg.fd_step);
  I.set_compact(cfg.compact);
  return I;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads) {
  ScenarioResult R;
  R.config = cfg;
  const auto radii = cfg.radii();
  const auto& tol = cfg.tolerances;

  stage(R.timings, "model", [&] {
    R.model = ModelSpace::make(cfg.model_dim, WarpingFunction::parse(cfg.warping));
    R.balance = balance_report(R.model, radii);
  });

  stage(R.timings, "immersion", [&] { R.immersion = std::make_unique<ParametricImmersion>(build_immersion(cfg)); });
  const auto& I = *R.immersion;

  stage(R.timings, "mesh", [&] {
    R.mesh = mesh(I, MeshResolution{cfg.resolution}, threads);
    const auto& M = R.mesh;
    auto& S = R.summary;
    S.min_r = M.min_r();
    S.max_r = M.max_r();
    for (std::size_t v = 0; v < M.vertices.size(); ++v) {
      const auto& vx = M.vertices[v];
      S.max_mean_curvature = std::max(S.max_mean_curvature, std::abs(vx.mean_curvature));
      S.sup_sff = std::max(S.sup_sff, vx.sff);
      if (static_cast<int>(v) != M.base_vertex && vx.r > AmbientChart::pole_exclusion)
        S.rho_over_r_max = std::max(S.rho_over_r_max, M.rho[v] / vx.r);
    }
    S.minimal = S.max_mean_curvature <= tol.minimality;
    double incident = 0.0;
    for (const auto& e : M.edges)
      if (e.a == M.base_vertex || e.b == M.base_vertex) incident = std::max(incident, e.length);
    S.pole_in_image = S.min_r <= 0.5 * incident;
    if (!M.compact && cfg.t_hi > M.horizon)
      throw ConfigError("[radii] t_hi", "t_hi = " + format_double(cfg.t_hi) + " lies beyond the meshed horizon r = " +
                                            format_double(M.horizon));
  });

  stage(R.timings, "topology", [&] {
    const auto& M = R.mesh;
    R.ends = count_ends(M, radii, threads, cfg.hypothesis.window_fraction);
    R.per_end_area_max.assign(radii.size(), nan);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const auto per_end = boundary_area_per_end(extrinsic_ball(M, radii[k]));
      if (!per_end.empty()) R.per_end_area_max[k] = per_end.front();
    }
    if (cfg.critical_annulus) {
      const auto [lo, hi] = *cfg.critical_annulus;
      R.scans.push_back({"critical_point_scan", lo, hi, critical_point_scan(M, lo, hi)});
    }
    if (cfg.convexity_region) {
      const auto [lo, hi] = *cfg.convexity_region;
      const RadialFunction F =
          cfg.convexity_F == "half_r_squared" ? half_r_squared() : integral_of_warping(I.ambient().warping());
      R.scans.push_back({"convexity_scan", lo, hi, convexity_scan(M, I, lo, hi, F, threads)});
    }
  });

  stage(R.timings, "verifier", [&] {
    const auto& M = R.mesh;
    const auto& S = R.summary;
    R.growth = growth_curves(M, R.model, radii, threads, tol.monotone);
    R.eps_fit = check_hypothesis(M, R.model, HypothesisForm::T2_eps_over_wprime_sq, radii, cfg.hypothesis);
    for (auto form : cfg.forms) R.fits.push_back(check_hypothesis(M, R.model, form, radii, cfg.hypothesis));

    const std::string not_minimal = "hypotheses violated (not minimal, max |H| = " + format_double(S.max_mean_curvature) + ")";
    auto iso = isoperimetric_verdict(R.growth, tol.isoperimetric);
    if (!R.balance.below_ok) add_note(iso.notes, "model not balanced from below on the radii grid");
    auto mono = monotonicity_verdict(R.growth);
    auto comp = volume_comparison_verdict(R.growth, tol.volume_comparison);
    if (!S.pole_in_image) {
      comp.passed.reset();
      add_note(comp.notes, "not applicable: pole not in the image");
    }
    for (auto* v : {&iso, &mono, &comp}) {
      if (S.minimal) continue;
      v->passed.reset();
      add_note(v->notes, not_minimal);
    }
    R.verdicts = {iso, mono, comp};

    auto ends = ends_inequalities(R.growth, R.ends, R.eps_fit, M.param_dim, M.compact,
                                  EndsTolerances{tol.volume_growth, tol.area_growth});
    for (auto& v : ends) {
      if (!S.minimal && v.passed) {
        v.passed.reset();
        add_note(v.notes, not_minimal);
      }
      R.verdicts.push_back(std::move(v));
    }

    auto bm = bishop_myers_verdict(radii, R.per_end_area_max, R.eps_fit.fitted_curve, M.param_dim,
                                   I.ambient().warping(), tol.area_growth);
    if (M.compact) {
      bm.passed.reset();
      add_note(bm.notes, "hypotheses violated (compact)");
    }
    R.verdicts.push_back(std::move(bm));

    R.gap = gap_diagnostic(R.growth, R.ends, S.minimal, S.sup_sff, tol.gap_f, tol.totally_geodesic);
    VerificationVerdict gap;
    gap.inequality = "gap_diagnostic";
    gap.tolerance = tol.totally_geodesic;
    gap.margin = tol.totally_geodesic - S.sup_sff;
    gap.notes = R.gap.verdict;
    if (R.gap.triggered) gap.passed = !R.gap.anomaly;
    R.verdicts.push_back(std::move(gap));

    for (const auto& scan : R.scans) {
      VerificationVerdict v;
      v.inequality = scan.name == "critical_point_scan" ? "critical_point_free" : "strict_convexity";
      v.t = {scan.lo, scan.hi};
      v.lhs = {scan.extremum.value};
      v.rhs = {0.0};
      v.margin = scan.extremum.value;
      v.notes = "minimum at vertex " + std::to_string(scan.extremum.vertex) + " over " +
                std::to_string(scan.extremum.samples) + " vertices with r in [" + format_double(scan.lo) + ", " +
                format_double(scan.hi) + "]";
      if (M.compact) {
        add_note(v.notes, "hypotheses violated (compact)");
      } else {
        v.passed = scan.extremum.value > 0.0;
      }
      R.verdicts.push_back(std::move(v));
    }
  });
  return R;
}

}  // namespace warplab
