#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "warplab/pipeline.hpp"

namespace warplab {

/// Columns t,vol_Dt,area_bdry,ends.
void write_curves_csv(const ScenarioResult& R, std::ostream& out);
/// Plot data: t,f,g,isop_lhs,isop_rhs,eps_hat.
void write_growth_csv(const ScenarioResult& R, std::ostream& out);
/// Deterministic verdict document (no timings, no paths).
std::string verdicts_json(const ScenarioResult& R);

std::string sha256_hex(const std::string& bytes);

struct OutputFile {
  std::string name;
  std::size_t bytes = 0;
  std::string sha256;
};

struct ManifestInput {
  std::string config_source;
  std::string config_text;
  std::vector<std::string> tolerance_overrides;
  int threads = 1;
};

/// Writes the configured outputs plus manifest.json into `dir` (created if missing) and
/// returns the data files written, manifest excluded.
std::vector<OutputFile> write_outputs(const ScenarioResult& R, const std::filesystem::path& dir,
                                      const ManifestInput& input);

}  // namespace warplab
