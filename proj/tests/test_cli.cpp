#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// stderr is folded into the captured output when `merge` is set.
Run run_cli(const std::string& args, bool merge = false) {
  const std::string cmd = std::string("'") + WARPLAB_CLI + "' " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("warplab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

const char* small_plane = R"([scenario]
name = small_plane
[ambient]
dim = 3
[model]
dim = 2
[immersion]
builtin = euclidean_plane
extent = 5
[mesh]
resolution = 81, 81
[radii]
t_lo = 1.5
t_hi = 4
count = 7
[scans]
critical_annulus = 1.5, 4
)";

}  // namespace

TEST_CASE("examples subcommand") {
  const auto list = run_cli("examples list");
  CHECK(list.status == 0);
  CHECK(list.out == "catenoid\nhigher_catenoid\nhyperbolic_hyperplane\nplane\nround_sphere\n");
  for (const char* name : {"catenoid", "plane", "round_sphere"}) {
    const auto emit = run_cli(std::string("examples emit ") + name);
    CHECK(emit.status == 0);
    CHECK(emit.out == slurp(fs::path(WARPLAB_SCENARIO_DIR) / (std::string(name) + ".cfg")));
  }
  CHECK(run_cli("examples emit unknown").status == 2);
}

TEST_CASE("model tables") {
  const auto flat = run_cli("model-tables space_form:0 -m 3 --grid 1:5:5");
  REQUIRE(flat.status == 0);
  const auto rows = csv_rows(flat.out);
  REQUIRE(rows.size() == 6);
  CHECK(flat.out.rfind("r,w,w1,w2,eta,Kw,Kfiber,volS,volB,q,q_eta\n", 0) == 0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][10]) - 1.0 / 3) <= 1e-12);

  const auto hyp = run_cli("model-tables space_form:-1 -m 3 --grid 0.5:4:8");
  REQUIRE(hyp.status == 0);
  for (const auto& row : csv_rows(hyp.out)) {
    if (row[0] == "r") continue;
    const double r = std::stod(row[0]);
    CHECK(std::stod(row[4]) == doctest::Approx(1.0 / std::tanh(r)).epsilon(1e-12));
  }

  const auto custom = run_cli("model-tables 'custom:r + 0.1*r^3' -m 3", true);
  CHECK(custom.status == 0);
  CHECK(custom.out.find("balanced from below") != std::string::npos);
  CHECK(run_cli("model-tables banana -m 3").status == 2);
  CHECK(run_cli("model-tables space_form:0 -m 3 --grid 5:1:3").status == 2);
}

TEST_CASE("run rejects a bad config with exit 2") {
  const auto dir = scratch("bad");
  std::string text = small_plane;
  text.replace(text.find("[model]\ndim = 2"), 15, "[model]\ndim = 3");
  std::ofstream(dir / "bad.cfg") << text;
  const auto r = run_cli("run '" + (dir / "bad.cfg").string() + "' --out '" + (dir / "out").string() + "'", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("requires ambient dim n > model dim m >= 2") != std::string::npos);
  CHECK(run_cli("run '" + (dir / "missing.cfg").string() + "'").status == 2);
}

TEST_CASE("run is deterministic and the manifest echo reproduces the digests") {
  const auto dir = scratch("determinism");
  std::ofstream(dir / "p.cfg") << small_plane;
  const std::string cfg = "'" + (dir / "p.cfg").string() + "'";
  REQUIRE(run_cli("run " + cfg + " --out '" + (dir / "a").string() + "' --threads 1").status == 0);
  REQUIRE(run_cli("run " + cfg + " --out '" + (dir / "b").string() + "' --threads 3").status == 0);
  for (const char* f : {"curves.csv", "growth.csv", "verdicts.json", "mesh.txt"}) {
    INFO(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  std::ofstream(dir / "echo.cfg") << manifest["config"]["text"].get<std::string>();
  REQUIRE(run_cli("run '" + (dir / "echo.cfg").string() + "' --out '" + (dir / "c").string() + "'").status == 0);
  const auto again = nlohmann::json::parse(slurp(dir / "c" / "manifest.json"));
  CHECK(manifest["outputs"] == again["outputs"]);
  CHECK(slurp(dir / "a" / "curves.csv").rfind("t,vol_Dt,area_bdry,ends\n", 0) == 0);
}

TEST_CASE("tolerance overrides reach the report") {
  const auto dir = scratch("override");
  std::ofstream(dir / "p.cfg") << small_plane;
  const auto r = run_cli("run '" + (dir / "p.cfg").string() + "' --out '" + (dir / "o").string() +
                         "' --tolerance isoperimetric=0.25 --tolerance monotone=0.5");
  REQUIRE(r.status == 0);
  const auto v = nlohmann::json::parse(slurp(dir / "o" / "verdicts.json"));
  CHECK(v["tolerances"]["isoperimetric"] == 0.25);
  CHECK(v["tolerances"]["monotone"] == 0.5);
  const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
  CHECK(m["config"]["tolerance_overrides"].size() == 2);
  CHECK(run_cli("run '" + (dir / "p.cfg").string() + "' --out '" + (dir / "x").string() + "' --tolerance nope=1")
            .status == 2);
}

TEST_CASE("bundled plane and catenoid") {
  const auto dir = scratch("bundled");
  const auto plane = run_cli("run '" + std::string(WARPLAB_SCENARIO_DIR) + "/plane.cfg' --out '" +
                             (dir / "plane").string() + "'");
  CHECK(plane.status == 0);
  CHECK(plane.out.find("FAIL") == std::string::npos);
  const auto v = nlohmann::json::parse(slurp(dir / "plane" / "verdicts.json"));
  for (const auto& verdict : v["verdicts"]) CHECK(verdict["passed"] == true);

  const auto cat = run_cli("run '" + std::string(WARPLAB_SCENARIO_DIR) + "/catenoid.cfg' --out '" +
                           (dir / "catenoid").string() + "'");
  CHECK(cat.status == 0);
  const auto c = nlohmann::json::parse(slurp(dir / "catenoid" / "verdicts.json"));
  CHECK(c["curves"]["ends_stabilized"] == 2);
}
