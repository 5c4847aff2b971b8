#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "warplab/builtin.hpp"
#include "warplab/verifier.hpp"

namespace warplab {

/// `[section]` headers, `key = value` lines, full-line comments starting with `#` or `;`.
struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;
};

struct IniDocument {
  std::string source;
  std::vector<IniSection> sections;

  /// Throws ConfigError on malformed lines and duplicate sections or keys.
  static IniDocument parse(std::string_view text, std::string source = "<config>");
  const IniSection* find(std::string_view name) const;
};

struct Tolerances {
  double volume_growth = 1e-2;
  double area_growth = 2e-2;
  double isoperimetric = 1e-2;
  double monotone = 1e-3;
  double volume_comparison = 1e-2;
  double minimality = 1e-5;
  double totally_geodesic = 1e-8;
  double gap_f = 1e-2;

  static const std::vector<std::string>& names();
  /// Throws std::invalid_argument for unknown names.
  double& at(std::string_view name);
  double get(std::string_view name) const;
};

struct ScenarioConfig {
  std::string name;
  std::string description;

  int ambient_dim = 3;
  std::string warping = "space_form:0";
  int model_dim = 2;

  std::string builtin;              // empty for a custom chart
  BuiltinParams params;
  std::vector<std::string> chart;   // custom chart components in u1..um
  bool compact = false;
  double fd_step = 1e-5;

  std::vector<int> resolution;
  std::vector<std::optional<ParamAxis>> axes;  // per-axis override, required for custom charts

  double t_lo = 1.0;
  double t_hi = 2.0;
  int count = 2;

  std::vector<HypothesisForm> forms;
  HypothesisParams hypothesis;

  std::optional<std::pair<double, double>> critical_annulus;
  std::optional<std::pair<double, double>> convexity_region;
  std::string convexity_F = "integral_w";  // or half_r_squared

  Tolerances tolerances;

  std::string output_directory;
  std::vector<std::string> formats{"csv", "json", "mesh"};

  std::vector<double> radii() const;
  bool wants(std::string_view format) const;
};

/// Parses and validates (n > m >= 2, radii, resolution, forms). ConfigError names the line
/// and field at fault.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source = "<config>");
ScenarioConfig load_scenario(const std::string& path);

/// Applies `name=value`; ConfigError on unknown names or bad numbers.
void apply_tolerance_override(ScenarioConfig& cfg, std::string_view assignment);

/// Canonical text of the effective configuration; parsing it yields an equal configuration.
std::string canonical_text(const ScenarioConfig& cfg);

}  // namespace warplab
