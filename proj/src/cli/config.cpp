#include "aenet/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aenet::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw std::runtime_error("config: key '" + key + "' has non-numeric value '" + value + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string Settings::get_str(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string Settings::require_str(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw std::runtime_error("config: missing required key '" + key + "'");
  return it->second;
}

double Settings::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_double(key, it->second);
}

Index Settings::get_index(const std::string& key, Index fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return static_cast<Index>(parse_double(key, it->second));
}

bool Settings::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: key '" + key + "' has non-boolean value '" + v + "'");
}

std::uint64_t Settings::get_seed(const std::string& key, std::uint64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw std::runtime_error("config: key '" + key + "' has non-integer value '" + it->second +
                             "'");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> Settings::get_doubles(const std::string& key) const {
  std::vector<double> out;
  auto it = kv_.find(key);
  if (it == kv_.end()) return out;
  for (const auto& item : split_commas(it->second)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<Index> Settings::get_indices(const std::string& key) const {
  std::vector<Index> out;
  for (double v : get_doubles(key)) out.push_back(static_cast<Index>(v));
  return out;
}

std::vector<std::string> Settings::get_strs(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return {};
  return split_commas(it->second);
}

void Settings::check_allowed(const std::set<std::string>& allowed,
                             const std::string& where) const {
  for (const auto& [key, value] : kv_) {
    if (!allowed.count(key))
      throw std::runtime_error("config: unknown key '" + key + "' in " + where);
  }
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::string current;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section header at line " +
                                 std::to_string(line_no));
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw std::runtime_error("config: empty section name at line " +
                                 std::to_string(line_no));
      cfg.sections.emplace(current, Settings{});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected 'key = value' at line " +
                               std::to_string(line_no));
    if (current.empty())
      throw std::runtime_error("config: key outside any [section] at line " +
                               std::to_string(line_no));
    cfg.sections[current].set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

}  // namespace aenet::cli
