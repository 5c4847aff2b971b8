#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warplab/config.hpp"

namespace warplab {

/// A pipeline stage failed. `exit_code` is 2 for configuration problems, 3 otherwise.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, int exit_code, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)), exit_code_(exit_code) {}

  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct ScanResult {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  VertexExtremum extremum;
};

struct SubmanifoldSummary {
  bool minimal = false;
  double max_mean_curvature = 0.0;
  double sup_sff = 0.0;
  bool pole_in_image = false;
  double min_r = 0.0;
  double max_r = 0.0;
  /// Largest ratio rho / r over vertices away from the base vertex; graph distances overestimate.
  double rho_over_r_max = 0.0;
};

struct ScenarioResult {
  ScenarioConfig config;
  ModelSpace model;  // comparison model, dimension m
  std::unique_ptr<ParametricImmersion> immersion;
  MeshedSubmanifold mesh;
  SubmanifoldSummary summary;
  BalanceVerdict balance;
  GrowthReport growth;
  EndsScan ends;
  HypothesisFit eps_fit;  // T2 form, drives the ends and Bishop-Myers checks
  std::vector<HypothesisFit> fits;
  std::vector<double> per_end_area_max;  // NaN where the ball has no boundary
  std::vector<ScanResult> scans;
  GapDiagnostic gap;
  std::vector<VerificationVerdict> verdicts;
  std::vector<StageTiming> timings;

  /// True when some verdict has passed == false.
  bool has_failures() const;
};

ParametricImmersion build_immersion(const ScenarioConfig& cfg);

/// model -> mesh -> topology -> verifier. Throws StageError.
ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads = 1);

}  // namespace warplab
