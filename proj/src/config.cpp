#include "warplab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "warplab/errors.hpp"
#include "warplab/expression.hpp"
#include "warplab/format.hpp"
#include "warplab/warping.hpp"

namespace warplab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string location(const std::string& source, int line) { return source + ":" + std::to_string(line); }

// Splits on commas outside parentheses.
std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

}  // namespace

IniDocument IniDocument::parse(std::string_view text, std::string source) {
  IniDocument doc;
  doc.source = std::move(source);
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = location(doc.source, line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "unterminated section header");
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(where, "empty section name");
      if (!seen_sections.insert(name).second) throw ConfigError(where, "duplicate section [" + name + "]");
      doc.sections.push_back({name, line_no, {}});
      seen_keys.clear();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    if (doc.sections.empty()) throw ConfigError(where, "key outside of any section");
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (!seen_keys.insert(key).second)
      throw ConfigError(where, "duplicate key '" + key + "' in [" + doc.sections.back().name + "]");
    doc.sections.back().entries.push_back({key, trim(std::string_view(line).substr(eq + 1)), line_no});
  }
  return doc;
}

const IniSection* IniDocument::find(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> n{"volume_growth",     "area_growth", "isoperimetric",    "monotone",
                                          "volume_comparison", "minimality",  "totally_geodesic", "gap_f"};
  return n;
}

double& Tolerances::at(std::string_view name) {
  if (name == "volume_growth") return volume_growth;
  if (name == "area_growth") return area_growth;
  if (name == "isoperimetric") return isoperimetric;
  if (name == "monotone") return monotone;
  if (name == "volume_comparison") return volume_comparison;
  if (name == "minimality") return minimality;
  if (name == "totally_geodesic") return totally_geodesic;
  if (name == "gap_f") return gap_f;
  throw std::invalid_argument("unknown tolerance '" + std::string(name) + "'");
}

double Tolerances::get(std::string_view name) const { return const_cast<Tolerances&>(*this).at(name); }

std::vector<double> ScenarioConfig::radii() const {
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) r[static_cast<std::size_t>(k)] = k == count - 1 ? t_hi : t_lo + (t_hi - t_lo) * k / (count - 1);
  return r;
}

bool ScenarioConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

namespace {

class Reader {
 public:
  explicit Reader(const IniDocument& doc) : doc_(doc) {}

  std::string where(const IniSection& s, const IniEntry& e) const {
    return location(doc_.source, e.line) + " [" + s.name + "] " + e.key;
  }

  double number(const IniSection& s, const IniEntry& e) const {
    try {
      return parse_number_expression(e.value);
    } catch (const std::exception& ex) {
      throw ConfigError(where(s, e), ex.what());
    }
  }

  int integer(const IniSection& s, const IniEntry& e) const { return integer_of(s, e, e.value); }

  int integer_of(const IniSection& s, const IniEntry& e, const std::string& text) const {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end || text.empty()) throw ConfigError(where(s, e), "expected an integer, got '" + text + "'");
    return v;
  }

  bool boolean(const IniSection& s, const IniEntry& e) const {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ConfigError(where(s, e), "expected true or false, got '" + e.value + "'");
  }

  std::pair<double, double> range(const IniSection& s, const IniEntry& e) const {
    const auto parts = split_list(e.value);
    if (parts.size() != 2) throw ConfigError(where(s, e), "expected 'lo, hi'");
    double v[2];
    for (int k = 0; k < 2; ++k) {
      try {
        v[k] = parse_number_expression(parts[static_cast<std::size_t>(k)]);
      } catch (const std::exception& ex) {
        throw ConfigError(where(s, e), ex.what());
      }
    }
    if (!(v[0] >= 0.0 && v[1] >= v[0])) throw ConfigError(where(s, e), "expected 0 <= lo <= hi");
    return {v[0], v[1]};
  }

 private:
  const IniDocument& doc_;
};


}  // namespace

ScenarioConfig parse_scenario(std::string_view text, const std::string& source) {
  const IniDocument doc = IniDocument::parse(text, source);
  const Reader rd(doc);
  ScenarioConfig cfg;
  std::string builtin_where, chart_where, model_where, radii_where, resolution_where, warping_where;
  std::vector<std::pair<int, std::string>> axis_entries;  // (axis index, where)
  std::vector<std::pair<std::string, std::string>> axis_values;
  bool have_builtin_param = false;
  std::string builtin_param_where;

  static const std::set<std::string> known_sections{"scenario", "ambient",    "model", "immersion", "mesh",
                                                    "radii",    "hypotheses", "scans", "tolerances", "output"};
  for (const auto& s : doc.sections) {
    if (!known_sections.count(s.name))
      throw ConfigError(location(source, s.line), "unknown section [" + s.name + "]");
    for (const auto& e : s.entries) {
      const std::string w = rd.where(s, e);
      auto unknown = [&] { throw ConfigError(w, "unknown key"); };
      if (s.name == "scenario") {
        if (e.key == "name") cfg.name = e.value;
        else if (e.key == "description") cfg.description = e.value;
        else unknown();
      } else if (s.name == "ambient") {
        if (e.key == "dim") cfg.ambient_dim = rd.integer(s, e);
        else if (e.key == "warping") {
          cfg.warping = e.value;
          warping_where = w;
        } else unknown();
      } else if (s.name == "model") {
        if (e.key == "dim") {
          cfg.model_dim = rd.integer(s, e);
          model_where = w;
        } else unknown();
      } else if (s.name == "immersion") {
        if (e.key == "builtin") {
          cfg.builtin = e.value;
          builtin_where = w;
        } else if (e.key == "chart") {
          cfg.chart = split_list(e.value);
          chart_where = w;
        } else if (e.key == "compact") cfg.compact = rd.boolean(s, e);
        else if (e.key == "fd_step") cfg.fd_step = rd.number(s, e);
        else {
          double* target = nullptr;
          if (e.key == "scale") target = &cfg.params.scale;
          else if (e.key == "radius") target = &cfg.params.radius;
          else if (e.key == "extent") target = &cfg.params.extent;
          else if (e.key == "v_max") target = &cfg.params.v_max;
          else if (e.key == "sigma_max") target = &cfg.params.sigma_max;
          else if (e.key == "cap") target = &cfg.params.cap;
          else unknown();
          *target = rd.number(s, e);
          if (!(*target > 0.0)) throw ConfigError(w, "must be positive");
          have_builtin_param = true;
          builtin_param_where = w;
        }
      } else if (s.name == "mesh") {
        if (e.key == "resolution") {
          resolution_where = w;
          for (const auto& part : split_list(e.value)) cfg.resolution.push_back(rd.integer_of(s, e, part));
        } else if (e.key.size() > 1 && e.key[0] == 'u') {
          const int k = rd.integer_of(s, e, e.key.substr(1));
          axis_entries.emplace_back(k, w);
          axis_values.emplace_back(e.key, e.value);
        } else unknown();
      } else if (s.name == "radii") {
        radii_where = w;
        if (e.key == "t_lo") cfg.t_lo = rd.number(s, e);
        else if (e.key == "t_hi") cfg.t_hi = rd.number(s, e);
        else if (e.key == "count") cfg.count = rd.integer(s, e);
        else unknown();
      } else if (s.name == "hypotheses") {
        if (e.key == "forms") {
          for (const auto& tag : split_list(e.value)) {
            try {
              cfg.forms.push_back(parse_hypothesis_form(tag));
            } catch (const std::exception& ex) {
              throw ConfigError(w, ex.what());
            }
          }
        } else if (e.key == "c") {
          cfg.hypothesis.c = rd.number(s, e);
          if (!(cfg.hypothesis.c > 0.0)) throw ConfigError(w, "c must be positive");
        } else if (e.key == "bins") {
          cfg.hypothesis.bins = rd.integer(s, e);
          if (cfg.hypothesis.bins < 1) throw ConfigError(w, "bins must be >= 1");
        } else if (e.key == "b") cfg.hypothesis.b = rd.number(s, e);
        else if (e.key == "window") {
          cfg.hypothesis.window_fraction = rd.number(s, e);
          if (!(cfg.hypothesis.window_fraction > 0.0 && cfg.hypothesis.window_fraction <= 1.0))
            throw ConfigError(w, "window must lie in (0, 1]");
        } else unknown();
      } else if (s.name == "scans") {
        if (e.key == "critical_annulus") cfg.critical_annulus = rd.range(s, e);
        else if (e.key == "convexity_region") cfg.convexity_region = rd.range(s, e);
        else if (e.key == "convexity_F") {
          if (e.value != "integral_w" && e.value != "half_r_squared")
            throw ConfigError(w, "expected integral_w or half_r_squared");
          cfg.convexity_F = e.value;
        } else unknown();
      } else if (s.name == "tolerances") {
        try {
          cfg.tolerances.at(e.key) = rd.number(s, e);
        } catch (const std::invalid_argument& ex) {
          throw ConfigError(w, ex.what());
        }
        if (!(cfg.tolerances.get(e.key) >= 0.0)) throw ConfigError(w, "tolerance must be >= 0");
      } else if (s.name == "output") {
        if (e.key == "directory") cfg.output_directory = e.value;
        else if (e.key == "formats") {
          cfg.formats = split_list(e.value);
          for (const auto& f : cfg.formats)
            if (f != "csv" && f != "json" && f != "mesh") throw ConfigError(w, "unknown format '" + f + "'");
        } else unknown();
      }
    }
  }

  const int n = cfg.ambient_dim;
  const int m = cfg.model_dim;
  if (!(n > m && m >= 2)) {
    std::ostringstream os;
    os << "requires ambient dim n > model dim m >= 2 (n = " << n << ", m = " << m << ")";
    throw ConfigError(model_where.empty() ? source + " [model] dim" : model_where, os.str());
  }
  WarpingFunction warp = WarpingFunction::space_form(0.0);
  try {
    warp = WarpingFunction::parse(cfg.warping);
  } catch (const std::exception& ex) {
    throw ConfigError(warping_where.empty() ? source + " [ambient] warping" : warping_where, ex.what());
  }

  if (cfg.builtin.empty() == cfg.chart.empty())
    throw ConfigError(source + " [immersion]", "exactly one of 'builtin' or 'chart' is required");
  if (!cfg.builtin.empty()) {
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), cfg.builtin) == names.end())
      throw ConfigError(builtin_where, "unknown builtin '" + cfg.builtin + "'");
    cfg.params.m = m;
  } else {
    if (have_builtin_param) throw ConfigError(builtin_param_where, "only meaningful for builtin immersions");
    if (static_cast<int>(cfg.chart.size()) != n) {
      std::ostringstream os;
      os << "chart needs " << n << " components (ambient dim), got " << cfg.chart.size();
      throw ConfigError(chart_where, os.str());
    }
  }
  if (!(cfg.fd_step > 0.0)) throw ConfigError(source + " [immersion] fd_step", "must be positive");

  if (static_cast<int>(cfg.resolution.size()) != m) {
    std::ostringstream os;
    os << "needs " << m << " per-axis counts, got " << cfg.resolution.size();
    throw ConfigError(resolution_where.empty() ? source + " [mesh] resolution" : resolution_where, os.str());
  }
  for (int c : cfg.resolution)
    if (c < 2) throw ConfigError(resolution_where, "each axis needs at least 2 vertices");

  cfg.axes.assign(static_cast<std::size_t>(m), std::nullopt);
  for (std::size_t k = 0; k < axis_entries.size(); ++k) {
    const auto& [idx, w] = axis_entries[k];
    if (idx < 1 || idx > m) throw ConfigError(w, "axis index outside 1.." + std::to_string(m));
    const auto parts = split_list(axis_values[k].second);
    if (parts.size() != 2 && !(parts.size() == 3 && (parts[2] == "wrap" || parts[2] == "polar")))
      throw ConfigError(w, "expected 'lo, hi', 'lo, hi, wrap' or 'lo, hi, polar'");
    ParamAxis ax;
    try {
      ax.lo = parse_number_expression(parts[0]);
      ax.hi = parse_number_expression(parts[1]);
    } catch (const std::exception& ex) {
      throw ConfigError(w, ex.what());
    }
    ax.wrap = parts.size() == 3 && parts[2] == "wrap";
    ax.polar = parts.size() == 3 && parts[2] == "polar";
    if (!(ax.hi > ax.lo)) throw ConfigError(w, "expected lo < hi");
    if (ax.wrap && cfg.resolution[static_cast<std::size_t>(idx - 1)] < 3)
      throw ConfigError(w, "wrapped axes need at least 3 vertices");
    cfg.axes[static_cast<std::size_t>(idx - 1)] = ax;
  }
  if (cfg.builtin.empty())
    for (int k = 0; k < m; ++k)
      if (!cfg.axes[static_cast<std::size_t>(k)])
        throw ConfigError(source + " [mesh] u" + std::to_string(k + 1), "custom charts need every axis range");

  const std::string rw = radii_where.empty() ? source + " [radii]" : radii_where;
  if (!(cfg.t_lo > 0.0 && cfg.t_hi > cfg.t_lo)) throw ConfigError(rw, "requires 0 < t_lo < t_hi");
  if (cfg.count < 2) throw ConfigError(rw, "count must be >= 2");
  if (!(cfg.t_hi < warp.domain_end())) throw ConfigError(rw, "t_hi beyond the warping domain");

  if (cfg.forms.empty()) cfg.forms = {HypothesisForm::T2_eps_over_wprime_sq, HypothesisForm::cor3_eps_over_r};
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_scenario(os.str(), path);
}

void apply_tolerance_override(ScenarioConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const std::string where = "--tolerance " + std::string(assignment);
  if (eq == std::string_view::npos) throw ConfigError(where, "expected name=value");
  const std::string name = trim(assignment.substr(0, eq));
  double value = 0.0;
  try {
    value = parse_number_expression(trim(assignment.substr(eq + 1)));
  } catch (const std::exception& ex) {
    throw ConfigError(where, ex.what());
  }
  if (!(value >= 0.0)) throw ConfigError(where, "tolerance must be >= 0");
  try {
    cfg.tolerances.at(name) = value;
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(where, ex.what());
  }
}

std::string canonical_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  auto list = [](const auto& items, auto fmt) {
    std::string s;
    for (std::size_t k = 0; k < items.size(); ++k) s += (k ? ", " : "") + fmt(items[k]);
    return s;
  };
  os << "[scenario]\n";
  if (!cfg.name.empty()) os << "name = " << cfg.name << '\n';
  if (!cfg.description.empty()) os << "description = " << cfg.description << '\n';
  os << "\n[ambient]\ndim = " << cfg.ambient_dim << "\nwarping = " << cfg.warping << '\n';
  os << "\n[model]\ndim = " << cfg.model_dim << '\n';
  os << "\n[immersion]\n";
  if (!cfg.builtin.empty()) {
    const auto& p = cfg.params;
    os << "builtin = " << cfg.builtin << "\nscale = " << format_double(p.scale) << "\nradius = " << format_double(p.radius)
       << "\nextent = " << format_double(p.extent) << "\nv_max = " << format_double(p.v_max)
       << "\nsigma_max = " << format_double(p.sigma_max) << "\ncap = " << format_double(p.cap) << '\n';
  } else {
    os << "chart = " << list(cfg.chart, [](const std::string& s) { return s; }) << '\n';
  }
  os << "compact = " << (cfg.compact ? "true" : "false") << "\nfd_step = " << format_double(cfg.fd_step) << '\n';
  os << "\n[mesh]\nresolution = " << list(cfg.resolution, [](int c) { return std::to_string(c); }) << '\n';
  for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
    if (!cfg.axes[k]) continue;
    os << 'u' << k + 1 << " = " << format_double(cfg.axes[k]->lo) << ", " << format_double(cfg.axes[k]->hi)
       << (cfg.axes[k]->wrap ? ", wrap" : cfg.axes[k]->polar ? ", polar" : "") << '\n';
  }
  os << "\n[radii]\nt_lo = " << format_double(cfg.t_lo) << "\nt_hi = " << format_double(cfg.t_hi)
     << "\ncount = " << cfg.count << '\n';
  os << "\n[hypotheses]\nforms = " << list(cfg.forms, [](HypothesisForm f) { return to_string(f); })
     << "\nc = " << format_double(cfg.hypothesis.c) << "\nbins = " << cfg.hypothesis.bins << '\n';
  if (cfg.hypothesis.b) os << "b = " << format_double(*cfg.hypothesis.b) << '\n';
  os << "window = " << format_double(cfg.hypothesis.window_fraction) << '\n';
  os << "\n[scans]\n";
  if (cfg.critical_annulus)
    os << "critical_annulus = " << format_double(cfg.critical_annulus->first) << ", "
       << format_double(cfg.critical_annulus->second) << '\n';
  if (cfg.convexity_region)
    os << "convexity_region = " << format_double(cfg.convexity_region->first) << ", "
       << format_double(cfg.convexity_region->second) << '\n';
  os << "convexity_F = " << cfg.convexity_F << '\n';
  os << "\n[tolerances]\n";
  for (const auto& name : Tolerances::names()) os << name << " = " << format_double(cfg.tolerances.get(name)) << '\n';
  os << "\n[output]\n";
  if (!cfg.output_directory.empty()) os << "directory = " << cfg.output_directory << '\n';
  os << "formats = " << list(cfg.formats, [](const std::string& s) { return s; }) << '\n';
  return os.str();
}

}  // namespace warplab
