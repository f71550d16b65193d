#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aenet/types.hpp"

namespace aenet::cli {

/// One config section's key-value pairs with typed accessors. Unknown keys
/// are rejected via check_allowed before a command runs.
class Settings {
 public:
  Settings() = default;
  explicit Settings(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  std::string get_str(const std::string& key, const std::string& fallback = "") const;
  std::string require_str(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  Index get_index(const std::string& key, Index fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<Index> get_indices(const std::string& key) const;
  std::vector<std::string> get_strs(const std::string& key) const;

  void check_allowed(const std::set<std::string>& allowed, const std::string& where) const;

 private:
  std::map<std::string, std::string> kv_;
};

/// Plain-text key = value file with [section] headers and '#' comments.
struct ConfigFile {
  std::map<std::string, Settings> sections;

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  Settings& section(const std::string& name) { return sections[name]; }
  const Settings* find(const std::string& name) const {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  }
};

}  // namespace aenet::cli
