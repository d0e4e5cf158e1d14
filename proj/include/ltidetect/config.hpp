#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ltidetect/numerics.hpp"

namespace ltidetect::config {

/// Sectioned key = value text, INI style, with numeric scalars, booleans,
/// quoted strings, and (nested) numeric arrays. Arrays may span lines
/// until their brackets balance. '#' and ';' start comments.
class ConfigFile {
 public:
  using Rows = std::vector<std::vector<double>>;
  using Value = std::variant<double, bool, std::string, Rows>;

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key,
                   double fallback) const;
  bool boolean_or(const std::string& section, const std::string& key,
                  bool fallback) const;
  std::string string_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  /// Flat numeric list; a nested array is flattened row by row.
  std::vector<double> number_list(const std::string& section,
                                  const std::string& key) const;
  /// Nested array of equal-length rows.
  Matrix matrix(const std::string& section, const std::string& key) const;

 private:
  const Value& get(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, Value>> sections_;
};

}  // namespace ltidetect::config
