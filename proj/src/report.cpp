#include "warplab/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "warplab/errors.hpp"
#include "warplab/format.hpp"

namespace warplab {

namespace {

using json = nlohmann::ordered_json;

json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json numbers(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

}  // namespace

void write_curves_csv(const ScenarioResult& R, std::ostream& out) {
  const auto& G = R.growth;
  out << "t,vol_Dt,area_bdry,ends\n";
  for (std::size_t k = 0; k < G.radii.size(); ++k)
    out << format_double(G.radii[k]) << ',' << format_double(G.vol[k]) << ',' << format_double(G.area[k]) << ','
        << R.ends.counts[k] << '\n';
}

void write_growth_csv(const ScenarioResult& R, std::ostream& out) {
  const auto& G = R.growth;
  out << "t,f,g,isop_lhs,isop_rhs,eps_hat\n";
  for (std::size_t k = 0; k < G.radii.size(); ++k)
    out << format_double(G.radii[k]) << ',' << format_double(G.f[k]) << ',' << format_double(G.g[k]) << ','
        << format_double(G.isop_lhs[k]) << ',' << format_double(G.isop_rhs[k]) << ','
        << format_double(R.eps_fit.fitted_curve[k]) << '\n';
}

std::string verdicts_json(const ScenarioResult& R) {
  const auto& cfg = R.config;
  const auto& M = R.mesh;
  const auto& S = R.summary;
  json doc;

  json mesh_info;
  mesh_info["resolution"] = cfg.resolution;
  mesh_info["vertices"] = M.vertices.size();
  mesh_info["simplices"] = M.simplex_count();
  mesh_info["compact"] = M.compact;
  mesh_info["horizon"] = number(M.horizon);
  mesh_info["verified_r_range"] = {number(S.min_r), number(S.max_r)};
  mesh_info["minimal"] = S.minimal;
  mesh_info["max_mean_curvature"] = number(S.max_mean_curvature);
  mesh_info["sup_sff"] = number(S.sup_sff);
  mesh_info["pole_in_image"] = S.pole_in_image;
  mesh_info["rho_over_r_max"] = number(S.rho_over_r_max);
  mesh_info["rho_note"] = "rho is a mesh-graph shortest path and overestimates intrinsic distance";

  doc["scenario"] = {{"name", cfg.name},
                     {"description", cfg.description},
                     {"immersion", cfg.builtin.empty() ? "custom" : cfg.builtin},
                     {"ambient_dim", cfg.ambient_dim},
                     {"warping", cfg.warping},
                     {"mesh", mesh_info}};

  const auto& B = R.balance;
  const auto curvature = R.model.warping.curvature();
  doc["model"] = {{"dim", R.model.dim},
                  {"warping", R.model.warping.spec()},
                  {"curvature", curvature ? number(*curvature) : json(nullptr)},
                  {"unit_sphere_volume", number(R.model.unit_sphere_volume)},
                  {"balance",
                   {{"below_ok", B.below_ok},
                    {"above_ok", B.above_ok},
                    {"totally_balanced", B.totally_balanced},
                    {"min_margin_below", number(B.min_margin_below)},
                    {"max_margin_above", number(B.max_margin_above)},
                    {"sufficient_condition_used", to_string(B.sufficient_condition_used)},
                    {"tolerance", number(B.tolerance)}}}};

  const auto& G = R.growth;
  json ends = json::array();
  for (int c : R.ends.counts) ends.push_back(c);
  doc["curves"] = {{"t", numbers(G.radii)},
                   {"vol_Dt", numbers(G.vol)},
                   {"area_bdry", numbers(G.area)},
                   {"ends", ends},
                   {"f", numbers(G.f)},
                   {"g", numbers(G.g)},
                   {"isop_lhs", numbers(G.isop_lhs)},
                   {"isop_rhs", numbers(G.isop_rhs)},
                   {"eps_hat", numbers(R.eps_fit.fitted_curve)},
                   {"per_end_area_max", numbers(R.per_end_area_max)},
                   {"ends_stabilized", R.ends.stabilized_count ? json(*R.ends.stabilized_count) : json(nullptr)},
                   {"ends_window", {number(R.ends.window_lo), number(R.ends.window_hi)}},
                   {"monotone_f", G.monotone_f},
                   {"monotone_violation", number(G.monotone_violation)},
                   {"notes", G.notes}};

  json fits = json::array();
  for (const auto& F : R.fits) {
    fits.push_back({{"form", to_string(F.form)},
                    {"fitted_curve", numbers(F.fitted_curve)},
                    {"bin_width", number(F.bin_width)},
                    {"c", is_bound_form(F.form) ? number(F.c) : json(nullptr)},
                    {"applicable", F.applicable},
                    {"passes", F.applicable ? json(F.passes) : json(nullptr)},
                    {"verified_range", {number(F.verified_lo), number(F.verified_hi)}},
                    {"trend_decreasing", F.trend_decreasing},
                    {"R0", optional_number(F.R0)},
                    {"a_r", number(F.a_r)},
                    {"notes", F.notes}});
  }
  doc["hypotheses"] = fits;

  json verdicts = json::array();
  for (const auto& v : R.verdicts) {
    verdicts.push_back({{"inequality", v.inequality},
                        {"margin", number(v.margin)},
                        {"passed", v.passed ? json(*v.passed) : json(nullptr)},
                        {"notes", v.notes},
                        {"tolerance", number(v.tolerance)},
                        {"t", numbers(v.t)},
                        {"lhs", numbers(v.lhs)},
                        {"rhs", numbers(v.rhs)}});
  }
  doc["verdicts"] = verdicts;

  json tol;
  for (const auto& name : Tolerances::names()) tol[name] = number(cfg.tolerances.get(name));
  doc["tolerances"] = tol;
  return doc.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw NumericError("sha256: digest failed");
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  return os.str();
}

namespace {

OutputFile write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::ofstream out(dir / name, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return {name, content.size(), sha256_hex(content)};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::vector<OutputFile> write_outputs(const ScenarioResult& R, const std::filesystem::path& dir,
                                      const ManifestInput& input) {
  std::filesystem::create_directories(dir);
  std::vector<OutputFile> files;
  const auto& cfg = R.config;
  if (cfg.wants("csv")) {
    std::ostringstream curves, growth;
    write_curves_csv(R, curves);
    write_growth_csv(R, growth);
    files.push_back(write_file(dir, "curves.csv", curves.str()));
    files.push_back(write_file(dir, "growth.csv", growth.str()));
  }
  if (cfg.wants("json")) files.push_back(write_file(dir, "verdicts.json", verdicts_json(R)));
  if (cfg.wants("mesh")) {
    std::ostringstream mesh_text;
    write_mesh_text(R.mesh, mesh_text);
    files.push_back(write_file(dir, "mesh.txt", mesh_text.str()));
  }

  json manifest;
  manifest["tool"] = "warplab";
  manifest["version"] = WARPLAB_VERSION;
  manifest["created"] = utc_now();
  manifest["config"] = {{"source", input.config_source},
                        {"text", input.config_text},
                        {"tolerance_overrides", input.tolerance_overrides},
                        {"effective", canonical_text(cfg)}};
  manifest["threads"] = input.threads;
  json timings = json::array();
  for (const auto& t : R.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  manifest["timings"] = timings;
  json outputs = json::array();
  for (const auto& f : files) outputs.push_back({{"file", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  manifest["outputs"] = outputs;
  manifest["verdict_failures"] = R.has_failures();
  write_file(dir, "manifest.json", manifest.dump(2) + "\n");
  return files;
}

}  // namespace warplab
