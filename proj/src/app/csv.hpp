#pragma once

#include <string>
#include <vector>

#include "app/config.hpp"

namespace magreg::app {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;  // "# key: value" lines after the provenance block

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  void note(const std::string& key, const std::string& value) { notes.push_back(key + ": " + value); }
};

std::string fmt(double v);
std::string fmt(long long v);
inline std::string fmt(int v) { return fmt(static_cast<long long>(v)); }
inline std::string fmt(std::size_t v) { return fmt(static_cast<long long>(v)); }
inline std::string fmt(bool v) { return v ? "true" : "false"; }

/// '#' lines: version, command, seed, source and the resolved config.
std::string provenance_header(const RunConfig& cfg, const std::string& version);
std::string render(const std::string& header, const Table& table);

/// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace magreg::app
