// warplab: scenario runner, model tables and bundled examples.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "embedded_scenarios.hpp"
#include "warplab/config.hpp"
#include "warplab/errors.hpp"
#include "warplab/expression.hpp"
#include "warplab/format.hpp"
#include "warplab/parallel.hpp"
#include "warplab/pipeline.hpp"
#include "warplab/report.hpp"

namespace {

using namespace warplab;

constexpr int exit_ok = 0;
constexpr int exit_verdict_failure = 1;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string output_directory(const std::string& flag, const ScenarioConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.output_directory.empty()) return cfg.output_directory;
  if (const char* env = std::getenv("WARPLAB_OUT"); env && *env) return env;
  return "out";
}

int run_command(const std::string& path, const std::string& out_flag, int threads,
                const std::vector<std::string>& overrides) {
  const std::string text = read_file(path);
  ScenarioConfig cfg = parse_scenario(text, path);
  for (const auto& o : overrides) apply_tolerance_override(cfg, o);
  const auto result = run_scenario(cfg, threads);
  const std::string dir = output_directory(out_flag, cfg);
  write_outputs(result, dir, ManifestInput{path, text, overrides, resolve_threads(threads)});

  std::cout << "scenario " << (cfg.name.empty() ? path : cfg.name) << " -> " << dir << '\n';
  std::cout << "ends: " << (result.ends.stabilized_count ? std::to_string(*result.ends.stabilized_count) : "unstable")
            << ", horizon " << format_double(result.mesh.horizon) << '\n';
  for (const auto& v : result.verdicts) {
    const char* tag = !v.passed ? "N/A " : *v.passed ? "PASS" : "FAIL";
    std::cout << tag << "  " << v.inequality << "  margin=" << format_double(v.margin);
    if (!v.notes.empty()) std::cout << "  (" << v.notes << ')';
    std::cout << '\n';
  }
  return result.has_failures() ? exit_verdict_failure : exit_ok;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("--grid", "expected a:b:n");
  const double a = parse_number_expression(parts[0]);
  const double b = parse_number_expression(parts[1]);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("--grid", "point count '" + parts[2] + "' is not an integer");
  }
  if (!(a > 0.0) || !(b >= a) || n < 1 || (n > 1 && !(b > a)))
    throw ConfigError("--grid", "requires 0 < a < b and n >= 1");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = n == 1 ? a : (k == n - 1 ? b : a + (b - a) * k / (n - 1));
  return grid;
}

int model_tables_command(const std::string& spec, int m, const std::string& grid_spec) {
  WarpingFunction w = WarpingFunction::space_form(0.0);
  try {
    w = WarpingFunction::parse(spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("warping spec", e.what());
  }
  if (m < 2) throw ConfigError("-m", "model dimension must be >= 2");
  const auto grid = parse_grid(grid_spec);
  const auto M = ModelSpace::make(m, w);
  for (double r : grid)
    if (!(r < w.domain_end())) throw ConfigError("--grid", "radius " + format_double(r) + " outside the warping domain");

  std::cout << "r,w,w1,w2,eta,Kw,Kfiber,volS,volB,q,q_eta\n";
  for (double r : grid) {
    const double eta = mean_curvature_eta(w, r);
    const double q = isoperimetric_quotient(M, r);
    std::cout << format_double(r) << ',' << format_double(w.value(r)) << ',' << format_double(w.d1(r)) << ','
              << format_double(w.d2(r)) << ',' << format_double(eta) << ',' << format_double(radial_curvature(w, r))
              << ',' << format_double(fiber_curvature(w, r)) << ',' << format_double(vol_fiber(M, r)) << ','
              << format_double(vol_ball(M, r)) << ',' << format_double(q) << ',' << format_double(q * eta) << '\n';
  }
  const auto B = balance_report(M, grid);
  std::cerr << "balanced from below: " << (B.below_ok ? "yes" : "no") << " (min q*eta - 1/m = "
            << format_double(B.min_margin_below) << ")\n"
            << "balanced from above: " << (B.above_ok ? "yes" : "no") << " (max q*eta - 1/(m-1) = "
            << format_double(B.max_margin_above) << ")\n"
            << "totally balanced: " << (B.totally_balanced ? "yes" : "no") << '\n'
            << "sufficient condition: " << to_string(B.sufficient_condition_used) << '\n';
  return exit_ok;
}

int examples_command(const std::string& action, const std::string& name) {
  if (action == "list") {
    for (const auto& s : embedded_scenarios) std::cout << s.name << '\n';
    return exit_ok;
  }
  if (name.empty()) throw ConfigError("examples emit", "missing example name");
  for (const auto& s : embedded_scenarios) {
    if (s.name == name) {
      std::cout << s.text;
      return exit_ok;
    }
  }
  throw ConfigError("examples emit", "unknown example '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warplab: comparison-geometry laboratory for warped-product model spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(WARPLAB_VERSION));

  std::string cfg_path, out_dir;
  int threads = 1;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", cfg_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory (default: config, then $WARPLAB_OUT, then ./out)");
  run->add_option("--threads", threads, "worker threads, 0 = one per hardware thread")->check(CLI::NonNegativeNumber);
  run->add_option("--tolerance", overrides, "tolerance override name=value (repeatable)");

  std::string spec, grid = "0.5:5:10";
  int dim = 3;
  auto* tables = app.add_subcommand("model-tables", "tabulate model-space quantities as CSV");
  tables->add_option("spec", spec, "warping spec, space_form:<b> or custom:<expr>")->required();
  tables->add_option("-m,--dim", dim, "model dimension m")->required();
  tables->add_option("--grid", grid, "radius grid a:b:n");

  std::string action, name;
  auto* examples = app.add_subcommand("examples", "list or emit bundled scenario configs");
  examples->add_option("action", action, "list | emit")->required()->check(CLI::IsMember({"list", "emit"}));
  examples->add_option("name", name, "example name for emit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return run_command(cfg_path, out_dir, threads, overrides);
    if (*tables) return model_tables_command(spec, dim, grid);
    if (*examples) return examples_command(action, name);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const StageError& e) {
    std::cerr << e.what() << '\n';
    return e.exit_code();
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_ok;
}
