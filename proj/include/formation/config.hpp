#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formation/types.hpp"

namespace formation {

/// Parse or validation failure. what() names the key and, when known, the
/// source line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key/value view of a scenario file.
///
///   # comment
///   [controller]
///   Kp = 0.25, 0.4, 0.3
///   Kp.x = 0.5          # component override, applied after the vector
///
/// Section names prefix their keys with a dot. Values are kept as text and
/// interpreted on lookup so that error messages can point at the line.
class Config {
 public:
  struct Entry {
    std::string value;
    std::string origin;  // "file.cfg:12" or "--set"
  };

  static Config parse(std::string_view text, const std::string& source = "<string>");
  static Config load(const std::filesystem::path& path);

  /// Adds or replaces one key from a "key=value" override.
  void apply_override(std::string_view assignment);
  void set(const std::string& key, std::string value, std::string origin);

  bool has(const std::string& key) const { return entries_.contains(key); }
  const Entry& entry(const std::string& key) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }

  /// Scalar lookups. Throw ConfigError when the key is missing or malformed.
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, std::string fallback) const;

  /// A vector key holds one expression (broadcast) or three comma separated
  /// ones. Component keys key.x, key.y, key.z override single entries.
  Vec3 vec3(const std::string& key) const;
  Vec3 vec3_or(const std::string& key, const Vec3& fallback) const;
  /// Comma separated list of expressions of any length.
  std::vector<double> numbers(const std::string& key) const;

  /// Named constants available to expressions (always includes pi).
  void define(const std::string& name, double value) { constants_[name] = value; }

  /// Marks a key as understood; reject_unused() reports every other key.
  void touch(const std::string& key) const { used_[key] = true; }
  void reject_unused() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  /// Evaluates one expression, attributing errors to key.
  double evaluate(const std::string& key, std::string_view expr) const;

 private:
  std::map<std::string, Entry> entries_;
  std::map<std::string, double> constants_{{"pi", 3.14159265358979323846}};
  mutable std::map<std::string, bool> used_;
};

/// Evaluates + - * / ^, parentheses, unary signs, numbers and named
/// constants. Throws std::invalid_argument describing the first problem.
double evaluate_expression(std::string_view expr, const std::map<std::string, double>& constants);

/// Splits on commas at parenthesis depth zero and trims whitespace.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

std::string trim(std::string_view s);

/// %.17g, enough digits to read the same double back.
std::string format_double(double v);

}  // namespace formation
