#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "collapse/errors.hpp"

namespace collapse {

// Flat key = value experiment configuration.  One assignment per line,
// '#' starts a comment, blank lines ignored, keys unique.  Values are
// strings, numbers, or comma-separated number lists depending on the schema
// the experiment applies.

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

class Config {
 public:
  static Config parse_string(const std::string& text, const std::string& origin = "<string>") {
    Config c;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = raw;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(Errc::config_invalid,
             origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
      std::string key = detail::trim(line.substr(0, eq));
      std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty())
        fail(Errc::config_invalid, origin + ":" + std::to_string(line_no) + ": empty key");
      for (char ch : key)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
          fail(Errc::config_invalid,
               origin + ":" + std::to_string(line_no) + ": bad character in key '" + key + "'");
      if (c.find(key))
        fail(Errc::config_invalid,
             origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
      c.entries_.push_back(ConfigEntry{key, value, line_no});
    }
    return c;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  const std::vector<ConfigEntry>& entries() const { return entries_; }

  const std::string* find(const std::string& key) const {
    for (const auto& e : entries_)
      if (e.key == key) return &e.value;
    return nullptr;
  }

  void set(const std::string& key, const std::string& value) {
    for (auto& e : entries_)
      if (e.key == key) {
        e.value = value;
        return;
      }
    entries_.push_back(ConfigEntry{key, value, 0});
  }

 private:
  std::vector<ConfigEntry> entries_;
};

// Schema-checked view of a Config.  Experiments declare their fields; every
// config key must match a declared field (unknown keys are errors naming the
// key), required fields must be present, and numeric ranges are enforced
// with messages naming the field.
class ConfigView {
 public:
  explicit ConfigView(const Config& c) : cfg_(c) {}

  double number(const std::string& key, double min, double max) {
    const std::string& raw = require(key);
    double v = parse_number(key, raw);
    check_range(key, v, min, max);
    return v;
  }

  double number_or(const std::string& key, double fallback, double min, double max) {
    mark(key);
    const std::string* raw = cfg_.find(key);
    if (!raw) return fallback;
    double v = parse_number(key, *raw);
    check_range(key, v, min, max);
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t min, std::uint64_t max) {
    const std::string& raw = require(key);
    std::uint64_t v = parse_integer(key, raw);
    if (v < min || v > max)
      fail(Errc::config_invalid, "field '" + key + "': value " + raw + " outside [" +
                                     std::to_string(min) + ", " + std::to_string(max) + "]");
    return v;
  }

  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback, std::uint64_t min,
                           std::uint64_t max) {
    mark(key);
    const std::string* raw = cfg_.find(key);
    if (!raw) return fallback;
    std::uint64_t v = parse_integer(key, *raw);
    if (v < min || v > max)
      fail(Errc::config_invalid, "field '" + key + "': value " + *raw + " outside [" +
                                     std::to_string(min) + ", " + std::to_string(max) + "]");
    return v;
  }

  std::vector<double> number_list(const std::string& key, double min, double max,
                                  std::size_t min_len = 1) {
    const std::string& raw = require(key);
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
      item = detail::trim(item);
      if (item.empty())
        fail(Errc::config_invalid, "field '" + key + "': empty list element");
      double v = parse_number(key, item);
      check_range(key, v, min, max);
      out.push_back(v);
    }
    if (out.size() < min_len)
      fail(Errc::config_invalid,
           "field '" + key + "': need at least " + std::to_string(min_len) + " values");
    return out;
  }

  std::string keyword(const std::string& key, const std::vector<std::string>& allowed) {
    const std::string& raw = require(key);
    for (const auto& k : allowed)
      if (raw == k) return raw;
    std::string msg = "field '" + key + "': '" + raw + "' is not one of {";
    for (std::size_t i = 0; i < allowed.size(); ++i)
      msg += (i ? ", " : "") + allowed[i];
    fail(Errc::config_invalid, msg + "}");
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    mark(key);
    const std::string* raw = cfg_.find(key);
    return raw ? *raw : fallback;
  }

  // Call after all fields are consumed; rejects anything undeclared.
  void finish() const {
    for (const auto& e : cfg_.entries())
      if (!seen_.count(e.key))
        fail(Errc::config_invalid, "unknown field '" + e.key + "'");
  }

 private:
  const std::string& require(const std::string& key) {
    mark(key);
    const std::string* raw = cfg_.find(key);
    if (!raw) fail(Errc::config_invalid, "missing required field '" + key + "'");
    return *raw;
  }

  void mark(const std::string& key) { seen_.insert_or_assign(key, true); }

  double parse_number(const std::string& key, const std::string& raw) {
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      fail(Errc::config_invalid, "field '" + key + "': '" + raw + "' is not a number");
    if (!std::isfinite(v))
      fail(Errc::config_invalid, "field '" + key + "': value must be finite");
    return v;
  }

  std::uint64_t parse_integer(const std::string& key, const std::string& raw) {
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      fail(Errc::config_invalid, "field '" + key + "': '" + raw + "' is not a non-negative integer");
    return v;
  }

  void check_range(const std::string& key, double v, double min, double max) {
    if (!(v >= min && v <= max)) {
      std::ostringstream msg;
      msg << "field '" << key << "': value " << v << " outside [" << min << ", " << max << "]";
      fail(Errc::config_invalid, msg.str());
    }
  }

  const Config& cfg_;
  std::map<std::string, bool> seen_;
};

}  // namespace collapse
