#include "formation/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace formation {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const char c = i < text.size() ? text[i] : sep;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view s, const std::map<std::string, double>& constants)
      : s_(s), constants_(constants) {}

  double run() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw std::invalid_argument(what + " at column " + std::to_string(pos_ + 1) + " of '" +
                                std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  double power() {
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }
  double atom() {
    skip();
    if (pos_ >= s_.size()) error("expression ends early");
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) error("missing ')'");
      return v;
    }
    const char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(s_.substr(b, pos_ - b));
      const auto it = constants_.find(name);
      if (it == constants_.end()) {
        pos_ = b;
        error("unknown name '" + name + "'");
      }
      return it->second;
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) error("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }

  std::string_view s_;
  const std::map<std::string, double>& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

double evaluate_expression(std::string_view expr, const std::map<std::string, double>& constants) {
  const std::string t = trim(expr);
  if (t.empty()) throw std::invalid_argument("empty expression");
  return ExprParser(t, constants).run();
}

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string origin = source + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(origin + ": unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(origin + ": empty section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value', got '" + t + "'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ": missing key before '='");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.contains(full)) {
      throw ConfigError(origin + ": key '" + full + "' already set at " + cfg.entries_.at(full).origin);
    }
    cfg.entries_[full] = Entry{trim(std::string_view(t).substr(eq + 1)), origin};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.filename().string());
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + std::string(assignment) + "' has an empty key");
  set(key, trim(assignment.substr(eq + 1)), "--set");
}

void Config::set(const std::string& key, std::string value, std::string origin) {
  entries_[key] = Entry{std::move(value), std::move(origin)};
}

const Config::Entry& Config::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
  touch(key);
  return it->second;
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  const std::string where = it == entries_.end() ? std::string() : it->second.origin + ": ";
  throw ConfigError(where + "key '" + key + "': " + message);
}

double Config::evaluate(const std::string& key, std::string_view expr) const {
  try {
    const double v = evaluate_expression(expr, constants_);
    if (!std::isfinite(v)) fail(key, "value is not finite");
    return v;
  } catch (const std::invalid_argument& e) {
    fail(key, e.what());
  }
}

double Config::number(const std::string& key) const { return evaluate(key, entry(key).value); }

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::string Config::text(const std::string& key) const { return entry(key).value; }

std::string Config::text_or(const std::string& key, std::string fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  const std::string& raw = entry(key).value;
  if (trim(raw).empty()) return out;
  for (const auto& part : split_list(raw)) out.push_back(evaluate(key, part));
  return out;
}

Vec3 Config::vec3(const std::string& key) const {
  Vec3 v;
  if (has(key)) {
    const auto parts = numbers(key);
    if (parts.size() == 1) {
      v.setConstant(parts[0]);
    } else if (parts.size() == 3) {
      v = Vec3(parts[0], parts[1], parts[2]);
    } else {
      fail(key, "expected 1 or 3 values, got " + std::to_string(parts.size()));
    }
  } else if (!(has(key + ".x") && has(key + ".y") && has(key + ".z"))) {
    throw ConfigError("missing key '" + key + "'");
  }
  for (int a = 0; a < 3; ++a) {
    const std::string sub = key + "." + kAxisNames[a];
    if (has(sub)) v(a) = number(sub);
  }
  return v;
}

Vec3 Config::vec3_or(const std::string& key, const Vec3& fallback) const {
  if (has(key)) return vec3(key);
  Vec3 v = fallback;
  for (int a = 0; a < 3; ++a) {
    const std::string sub = key + "." + kAxisNames[a];
    if (has(sub)) v(a) = number(sub);
  }
  return v;
}

void Config::reject_unused() const {
  for (const auto& [key, e] : entries_) {
    if (!used_.contains(key)) throw ConfigError(e.origin + ": unknown key '" + key + "'");
  }
}

}  // namespace formation
