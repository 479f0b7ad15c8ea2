#include "kpp/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kpp/io.hpp"

namespace kpp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Strips a trailing comment that is not inside quotes or brackets.
std::string strip_comment(const std::string& s) {
  bool in_quote = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_quote = !in_quote;
    if (s[i] == '#' && !in_quote) return s.substr(0, i);
  }
  return s;
}

double parse_number_token(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw ConfigParse("line " + std::to_string(line) +
                      ": expected a number, got '" + tok + "'");
  }
  return v;
}

std::vector<double> parse_array_token(const std::string& tok, int line) {
  if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']') {
    throw ConfigParse("line " + std::to_string(line) + ": expected an array");
  }
  std::vector<double> out;
  std::string body = tok.substr(1, tok.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number_token(item, line));
  }
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  return parse_string(read_file(path));
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  cfg.raw_ = text;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigParse("line " + std::to_string(lineno) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigParse("line " + std::to_string(lineno) +
                          ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigParse("line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty() || e.value.empty()) {
      throw ConfigParse("line " + std::to_string(lineno) +
                        ": empty key or value");
    }
    if (e.section.empty()) {
      throw ConfigParse("line " + std::to_string(lineno) +
                        ": key outside any [section]");
    }
    cfg.entries_.push_back(std::move(e));
  }
  return cfg;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  const Entry* last = nullptr;
  for (const Entry& e : entries_) {
    if (e.section == section && e.key == key) last = &e;
  }
  return last;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

bool ConfigFile::has_section(const std::string& section) const {
  for (const Entry& e : entries_) {
    if (e.section == section) return true;
  }
  return false;
}

double ConfigFile::number(const std::string& section, const std::string& key,
                          double fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return parse_number_token(e->value, e->line);
}

double ConfigFile::require_number(const std::string& section,
                                  const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) {
    throw ConfigParse("missing required key [" + section + "] " + key);
  }
  e->consumed = true;
  return parse_number_token(e->value, e->line);
}

int ConfigFile::integer(const std::string& section, const std::string& key,
                        int fallback) {
  const double v = number(section, key, static_cast<double>(fallback));
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9) {
    throw ConfigParse("key [" + section + "] " + key + " must be an integer");
  }
  return i;
}

bool ConfigFile::boolean(const std::string& section, const std::string& key,
                         bool fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  if (e->value == "true") return true;
  if (e->value == "false") return false;
  throw ConfigParse("line " + std::to_string(e->line) +
                    ": expected true/false");
}

std::string ConfigFile::string(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  std::string v = e->value;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<double> ConfigFile::array(const std::string& section,
                                      const std::string& key,
                                      const std::vector<double>& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return parse_array_token(e->value, e->line);
}

std::vector<std::vector<double>> ConfigFile::arrays(const std::string& section,
                                                    const std::string& key) {
  std::vector<std::vector<double>> out;
  for (const Entry& e : entries_) {
    if (e.section == section && e.key == key) {
      e.consumed = true;
      out.push_back(parse_array_token(e.value, e.line));
    }
  }
  return out;
}

void ConfigFile::reject_unknown() const {
  std::string bad;
  for (const Entry& e : entries_) {
    if (!e.consumed) {
      if (!bad.empty()) bad += ", ";
      bad += "[" + e.section + "] " + e.key + " (line " +
             std::to_string(e.line) + ")";
    }
  }
  if (!bad.empty()) {
    throw ConfigParse("unknown config keys: " + bad);
  }
}

MuSpec parse_medium(ConfigFile& cfg) {
  const int dim = cfg.integer("medium", "dim", 1);
  if (dim != 1 && dim != 2) {
    throw ConfigParse("[medium] dim must be 1 or 2");
  }
  const std::string kind = cfg.string("medium", "kind", "constant");
  if (kind == "constant") {
    const double value = cfg.number("medium", "value", 1.0);
    if (value <= 0.0) throw ConfigParse("[medium] value must be positive");
    return MuSpec::constant(dim, value);
  }
  if (kind != "trig") {
    throw ConfigParse("[medium] kind must be constant or trig");
  }
  const double offset = cfg.number("medium", "offset", 1.0);
  std::vector<TrigTerm> terms;
  for (const auto& arr : cfg.arrays("medium", "term")) {
    const std::size_t want = dim == 1 ? 3 : 4;
    if (arr.size() != want) {
      throw ConfigParse("[medium] term needs " + std::to_string(want) +
                        " entries: k..., cos, sin");
    }
    TrigTerm t;
    t.k[0] = static_cast<int>(std::lround(arr[0]));
    if (dim == 2) t.k[1] = static_cast<int>(std::lround(arr[1]));
    t.cos_amp = arr[dim == 1 ? 1 : 2];
    t.sin_amp = arr[dim == 1 ? 2 : 3];
    terms.push_back(t);
  }
  if (terms.empty()) {
    throw ConfigParse("[medium] kind=trig needs at least one term");
  }
  return MuSpec::trig(dim, offset, std::move(terms));
}

int parse_grid_points(ConfigFile& cfg, int dim) {
  return cfg.integer("grid", "points", dim == 1 ? 64 : 32);
}

Vec parse_direction(ConfigFile& cfg, const std::string& section, int dim,
                    const Vec& fallback) {
  if (cfg.has(section, "theta_deg")) {
    const double th = cfg.require_number(section, "theta_deg");
    if (dim == 1) {
      return {std::cos(th * M_PI / 180.0) >= 0 ? 1.0 : -1.0, 0.0};
    }
    return unit(th * M_PI / 180.0);
  }
  const std::vector<double> fb =
      dim == 1 ? std::vector<double>{fallback[0]}
               : std::vector<double>{fallback[0], fallback[1]};
  const std::vector<double> v = cfg.array(section, "e", fb);
  if (static_cast<int>(v.size()) != dim) {
    throw ConfigParse("[" + section + "] e needs " + std::to_string(dim) +
                      " components");
  }
  Vec e{v[0], dim == 2 ? v[1] : 0.0};
  return normalized(e);
}

SimConfig parse_simulation(ConfigFile& cfg, const MuSpec& mu) {
  SimConfig sc;
  sc.dim = mu.dim;
  sc.mu = mu;
  sc.domain_half_width = cfg.number("simulation", "domain_half_width", 200.0);
  sc.points_per_cell = cfg.integer("simulation", "points_per_cell", 16);
  sc.dt = cfg.number("simulation", "dt", 0.05);
  sc.t_final = cfg.number("simulation", "t_final", 100.0);
  sc.level = cfg.number("simulation", "level", 0.5);
  sc.trace_dt = cfg.number("simulation", "trace_dt", 1.0);
  sc.boundary_tol = cfg.number("simulation", "boundary_tol", 1e-8);
  sc.init.radius = cfg.number("simulation", "init_radius", 1.0);
  sc.init.amplitude = cfg.number("simulation", "init_amplitude", 1.0);
  const std::string prof =
      cfg.string("simulation", "init_profile", "indicator");
  if (prof == "indicator") {
    sc.init.profile = InitSpec::Profile::Indicator;
  } else if (prof == "bump") {
    sc.init.profile = InitSpec::Profile::Bump;
  } else {
    throw ConfigParse("[simulation] init_profile must be indicator or bump");
  }
  if (sc.dt <= 0) throw ConfigParse("[simulation] dt must be positive");
  if (sc.t_final <= 0) throw ConfigParse("[simulation] t_final must be positive");
  sc.record_times = cfg.array("simulation", "record_times", {});
  const std::vector<double> rays =
      cfg.array("simulation", "ray_theta_deg", {0.0});
  sc.ray_angles.clear();
  for (double deg : rays) sc.ray_angles.push_back(deg * M_PI / 180.0);
  return sc;
}

HalfspaceConfig parse_halfspace(ConfigFile& cfg) {
  HalfspaceConfig hc;
  const std::string frame = cfg.string("halfspace", "frame", "linear");
  if (frame == "linear") {
    hc.frame.kind = Frame::Kind::Linear;
  } else if (frame == "log") {
    hc.frame.kind = Frame::Kind::LogShifted;
  } else {
    throw ConfigParse("[halfspace] frame must be linear or log");
  }
  hc.frame.alpha = cfg.number("halfspace", "alpha", -1.0);  // -1: theoretical
  hc.frame.T = cfg.number("halfspace", "T", -1.0);          // -1: default
  hc.xi_max = cfg.number("halfspace", "xi_max", 400.0);
  hc.points_per_cell = cfg.integer("halfspace", "points_per_cell", 16);
  hc.width_cells = cfg.integer("halfspace", "width_cells", 64);
  hc.dt = cfg.number("halfspace", "dt", 0.05);
  hc.t_final = cfg.number("halfspace", "t_final", 1000.0);
  hc.v0.center = cfg.number("halfspace", "v0_center", 2.0);
  hc.v0.radius = cfg.number("halfspace", "v0_radius", 1.0);
  hc.v0.amplitude = cfg.number("halfspace", "v0_amplitude", 1.0);
  hc.sigma = cfg.number("halfspace", "sigma", 1.0);
  hc.rho = cfg.number("halfspace", "rho", 0.5);
  hc.offset_L = cfg.number("halfspace", "offset_L", 5.0);
  hc.records_per_decade = cfg.integer("halfspace", "records_per_decade", 60);
  hc.record_t0 = cfg.number("halfspace", "record_t0", 1.0);
  hc.record_moments = cfg.boolean("halfspace", "record_moments", false);
  hc.tail_fit_lo = cfg.number("halfspace", "tail_fit_lo", 2.0);
  hc.tail_fit_hi = cfg.number("halfspace", "tail_fit_hi", 10.0);
  hc.prefactor_window = cfg.number("halfspace", "prefactor_window", 1.5);
  return hc;
}

}  // namespace kpp
