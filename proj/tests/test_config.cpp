#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "warplab/config.hpp"
#include "warplab/errors.hpp"

using namespace warplab;

namespace {

const char* minimal_text = R"(
[ambient]
dim = 3
[model]
dim = 2
[immersion]
builtin = euclidean_plane
[mesh]
resolution = 11, 11
[radii]
t_lo = 1
t_hi = 5
count = 5
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto p = text.find(from);
  REQUIRE(p != std::string::npos);
  return text.replace(p, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("ini reader") {
  const auto doc = IniDocument::parse("# c\n[a]\nx = 1\n; c\n\n[b]\ny=two words\n");
  REQUIRE(doc.sections.size() == 2);
  CHECK(doc.find("b")->entries[0].value == "two words");
  CHECK(doc.find("b")->entries[0].line == 7);
  CHECK(doc.find("c") == nullptr);
  CHECK_THROWS_AS(IniDocument::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(IniDocument::parse("[a]\n[a]\n"), ConfigError);
  CHECK_THROWS_AS(IniDocument::parse("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(IniDocument::parse("[a\n"), ConfigError);
  CHECK_THROWS_AS(IniDocument::parse("[a]\nnovalue\n"), ConfigError);
}

TEST_CASE("minimal scenario defaults") {
  const auto cfg = parse_scenario(minimal_text);
  CHECK(cfg.ambient_dim == 3);
  CHECK(cfg.radii().size() == 5);
  CHECK(cfg.radii().front() == 1.0);
  CHECK(cfg.radii().back() == 5.0);
  CHECK(cfg.forms.size() == 2);
  CHECK(cfg.wants("mesh"));
  CHECK(cfg.tolerances.get("minimality") == 1e-5);
}

TEST_CASE("validation errors name the line and field") {
  CHECK(error_of(replace(minimal_text, "dim = 2", "dim = 3")).find("n > model dim m >= 2") != std::string::npos);
  CHECK(error_of(replace(minimal_text, "dim = 2", "dim = 1")).find("t.cfg:5 [model] dim") != std::string::npos);
  CHECK(error_of(replace(minimal_text, "count = 5", "count = five")).find("[radii] count") != std::string::npos);
  CHECK(error_of(replace(minimal_text, "euclidean_plane", "torus")).find("unknown builtin") != std::string::npos);
  CHECK(error_of(replace(minimal_text, "11, 11", "11")).find("[mesh] resolution") != std::string::npos);
  CHECK(error_of(replace(minimal_text, "t_hi = 5", "t_hi = 0.5")).find("t_lo < t_hi") != std::string::npos);
  CHECK(error_of(std::string(minimal_text) + "[bogus]\n").find("unknown section") != std::string::npos);
  CHECK(error_of(std::string(minimal_text) + "[output]\nformats = xml\n").find("unknown format") != std::string::npos);
}

TEST_CASE("custom charts need every axis") {
  const std::string chart = replace(minimal_text, "builtin = euclidean_plane", "chart = u1, u2, 0.1*u1*u2");
  CHECK(error_of(chart).find("every axis") != std::string::npos);
  const auto cfg = parse_scenario(replace(chart, "resolution = 11, 11", "resolution = 11, 11\nu1 = -2, 2\nu2 = -2, 2"));
  CHECK(cfg.chart.size() == 3);
  CHECK(error_of(replace(chart, "u1, u2, 0.1*u1*u2", "u1, u2")).find("[immersion] chart") != std::string::npos);
}

TEST_CASE("tolerance overrides") {
  auto cfg = parse_scenario(minimal_text);
  apply_tolerance_override(cfg, "isoperimetric=0.05");
  CHECK(cfg.tolerances.isoperimetric == 0.05);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "monotone=abc"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "monotone"), ConfigError);
}

// Property: the canonical text is a fixed point of parse -> canonical_text.
TEST_CASE("canonical text round trips for every bundled scenario") {
  for (const auto& entry : std::filesystem::directory_iterator(WARPLAB_SCENARIO_DIR)) {
    const auto cfg = load_scenario(entry.path().string());
    const std::string once = canonical_text(cfg);
    const auto again = parse_scenario(once, "canonical");
    INFO(entry.path());
    CHECK(canonical_text(again) == once);
    CHECK(again.radii() == cfg.radii());
    CHECK(again.resolution == cfg.resolution);
    CHECK(read_file(entry.path()).size() > 0);
  }
}
