#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "collapse/errors.hpp"
#include "collapse/version.hpp"

namespace collapse {

// 17 significant digits round-trip any IEEE double through text.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // provenance: echoed config assignments, then summary scalars
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::pair<std::string, std::string>> summary;
};

inline std::string render_csv(const CsvTable& t) {
  std::string out;
  out += "# collapse-lab " + std::string(version_string) + "\n";
  for (const auto& [k, v] : t.config_echo) out += "# config " + k + " = " + v + "\n";
  for (const auto& [k, v] : t.summary) out += "# summary " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

// Atomic replace: write a sibling temp file, then rename over the target so
// a crash or full disk never leaves a truncated CSV behind.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(Errc::io_error, "write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(Errc::io_error, "cannot rename '" + tmp + "' to '" + path + "'");
  }
}

inline void emit_csv(const CsvTable& t, const std::string& path) {
  write_file_atomic(path, render_csv(t));
}

}  // namespace collapse
