#include "sclab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sclab/sha256.hpp"

namespace sclab {

std::string format_double(double value) {
  // %.17g always round-trips; drop digits while the value survives.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int CsvTable::require_column(const std::string& name, const std::string& file) const {
  const int idx = column(name);
  if (idx < 0)
    throw std::runtime_error(file + ": schema error: missing column '" + name + "'");
  return idx;
}

double CsvTable::number_at(std::size_t row, int col, const std::string& file) const {
  const std::string& cell = rows.at(row).at(static_cast<std::size_t>(col));
  char* end = nullptr;
  const double value = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    throw std::runtime_error(file + ": schema error: non-numeric value '" + cell +
                             "' in column '" + header.at(static_cast<std::size_t>(col)) + "'");
  return value;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": schema error: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw std::runtime_error(path + ": schema error: row with " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);  // binary: one byte layout everywhere
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_events_csv(std::ostream& out, const PointProcessPath& path) {
  out << "index,time\n";
  for (std::size_t i = 0; i < path.events.size(); ++i)
    out << (i + 1) << ',' << format_double(path.events[i]) << '\n';
}

void write_curve_csv(std::ostream& out, const Eigen::ArrayXd& values) {
  out << "s,value\n";
  const auto n = values.size() - 1;
  for (Eigen::Index k = 0; k <= n; ++k)
    out << format_double(static_cast<double>(k) / static_cast<double>(n)) << ','
        << format_double(values[k]) << '\n';
}

void RunManifest::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) { set(key, format_double(value)); }

void RunManifest::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void RunManifest::add_output(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  set("output." + name + ".sha256", sha256_file(path));
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("manifest: cannot open " + path);
  for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_key_values: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace sclab
