#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lgt {

/// Flat dotted-key experiment configuration. One `key = value` pair per
/// line; '#' starts a comment; comma-separated values make a list, and every
/// list-valued key becomes a sweep axis. Keys are kept in lexicographic
/// order, which fixes the canonical text, the config hash and the grid
/// expansion order.
class ConfigMap {
 public:
  std::map<std::string, std::vector<std::string>> values;

  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values.count(key) > 0; }
  void set(const std::string& key, const std::string& value);

  /// Scalar accessors; throw when the key holds a list of several values.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  /// Canonical serialization (sorted keys, normalized spacing); parsing it
  /// back yields an equal map.
  std::string canonical_text() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;

  /// Cross product over all list-valued keys except those in `fixed_axes`,
  /// in lexicographic key order (outer axes sort first).
  std::vector<ConfigMap> expand_grid(const std::vector<std::string>& fixed_axes = {}) const;
};

}  // namespace lgt
