#include "app/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace magreg::app {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string fmt(long long v) { return std::to_string(v); }

std::string provenance_header(const RunConfig& cfg, const std::string& version) {
  std::ostringstream out;
  out << "# magreg " << version << '\n';
  out << "# command: " << cfg.command << '\n';
  out << "# seed: " << cfg.seed << '\n';
  out << "# source: " << cfg.source << '\n';
  out << "# config:\n";
  std::istringstream yaml(cfg.to_yaml());
  for (std::string line; std::getline(yaml, line);) out << "#   " << line << '\n';
  return out.str();
}

std::string render(const std::string& header, const Table& table) {
  std::ostringstream out;
  out << header;
  for (const auto& n : table.notes) out << "# " << n << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace magreg::app
