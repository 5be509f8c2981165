#include "lgt/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lgt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_error(origin, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_error(origin, lineno, "empty key");
    if (value.empty()) parse_error(origin, lineno, "empty value for key '" + key + "'");
    if (key.find_first_of(" \t,") != std::string::npos)
      parse_error(origin, lineno, "key '" + key + "' contains whitespace or comma");
    if (cfg.has(key)) parse_error(origin, lineno, "duplicate key '" + key + "'");
    std::vector<std::string> items;
    std::stringstream vs(value);
    std::string item;
    while (std::getline(vs, item, ',')) {
      item = trim(item);
      if (item.empty()) parse_error(origin, lineno, "empty list element for key '" + key + "'");
      items.push_back(item);
    }
    cfg.values.emplace(key, std::move(items));
  }
  return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  std::vector<std::string> items;
  std::stringstream vs(value);
  std::string item;
  while (std::getline(vs, item, ',')) items.push_back(trim(item));
  values[key] = items;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  if (it->second.size() != 1)
    throw std::runtime_error("key '" + key + "' is a list where a scalar is required");
  return it->second[0];
}

std::string ConfigMap::require_string(const std::string& key) const {
  if (!has(key)) throw std::runtime_error("missing required config key '" + key + "'");
  return get_string(key, "");
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string s = get_string(key, "");
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("key '" + key + "': not a number: '" + s + "'");
  }
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string s = get_string(key, "");
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("key '" + key + "': not an integer: '" + s + "'");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key, "");
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::runtime_error("key '" + key + "': not a boolean: '" + s + "'");
}

std::vector<std::string> ConfigMap::get_list(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return {};
  return it->second;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& s : get_list(key)) {
    try {
      out.push_back(std::stod(s));
    } catch (const std::exception&) {
      throw std::runtime_error("key '" + key + "': not a number: '" + s + "'");
    }
  }
  return out;
}

std::vector<int> ConfigMap::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& s : get_list(key)) {
    try {
      out.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw std::runtime_error("key '" + key + "': not an integer: '" + s + "'");
    }
  }
  return out;
}

std::string ConfigMap::canonical_text() const {
  std::string out;
  for (const auto& [key, items] : values) {
    out += key;
    out += " = ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      out += items[i];
      if (i + 1 < items.size()) out += ", ";
    }
    out += "\n";
  }
  return out;
}

std::uint64_t ConfigMap::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : canonical_text()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string ConfigMap::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

std::vector<ConfigMap> ConfigMap::expand_grid(const std::vector<std::string>& fixed_axes) const {
  std::vector<std::string> axes;
  for (const auto& [key, items] : values) {
    if (items.size() < 2) continue;
    if (std::find(fixed_axes.begin(), fixed_axes.end(), key) != fixed_axes.end()) continue;
    axes.push_back(key);  // map iteration is already lexicographic
  }
  std::vector<ConfigMap> grid{*this};
  for (const std::string& axis : axes) {
    std::vector<ConfigMap> next;
    for (const ConfigMap& base : grid) {
      for (const std::string& v : base.values.at(axis)) {
        ConfigMap point = base;
        point.values[axis] = {v};
        next.push_back(std::move(point));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

}  // namespace lgt
