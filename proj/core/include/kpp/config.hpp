#pragma once

#include <string>
#include <vector>

#include "kpp/cell.hpp"
#include "kpp/frontsim.hpp"
#include "kpp/grid.hpp"
#include "kpp/halfspace.hpp"
#include "kpp/speed.hpp"

namespace kpp {

/// Minimal TOML-style config: "#" comments, [section] headers and
/// key = value lines, where value is a number, a quoted string, a boolean
/// or a bracketed numeric array. Keys may repeat (used for medium terms).
/// Every key must be consumed by the command reading the file; leftovers
/// are rejected (ConfigParse).
class ConfigFile {
public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  double number(const std::string& section, const std::string& key,
                double fallback);
  double require_number(const std::string& section, const std::string& key);
  int integer(const std::string& section, const std::string& key,
              int fallback);
  bool boolean(const std::string& section, const std::string& key,
               bool fallback);
  std::string string(const std::string& section, const std::string& key,
                     const std::string& fallback);
  std::vector<double> array(const std::string& section, const std::string& key,
                            const std::vector<double>& fallback);
  /// All values of a repeated array-valued key, in file order.
  std::vector<std::vector<double>> arrays(const std::string& section,
                                          const std::string& key);

  /// Throws ConfigParse naming any key that was never consumed.
  void reject_unknown() const;

  const std::string& raw_text() const { return raw_; }

private:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;  // raw token
    int line = 0;
    mutable bool consumed = false;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  std::vector<Entry> entries_;
  std::string raw_;
};

/// [medium] section -> analytic medium description.
MuSpec parse_medium(ConfigFile& cfg);
/// [grid] points (validated power of two >= 8); fallback by dimension.
int parse_grid_points(ConfigFile& cfg, int dim);

Vec parse_direction(ConfigFile& cfg, const std::string& section, int dim,
                    const Vec& fallback);

SimConfig parse_simulation(ConfigFile& cfg, const MuSpec& mu);
HalfspaceConfig parse_halfspace(ConfigFile& cfg);

}  // namespace kpp
