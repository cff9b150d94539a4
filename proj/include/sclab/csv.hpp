#pragma once

#include <Eigen/Core>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sclab/simulate.hpp"

namespace sclab {

/// Shortest round-trip decimal representation of a double; output bytes are
/// fully determined by the value.
std::string format_double(double value);

/// A CSV table held as header + string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  /// Column index or a schema error naming the missing column.
  int require_column(const std::string& name, const std::string& file) const;
  double number_at(std::size_t row, int col, const std::string& file) const;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);

/// Event dump, columns (index, time).
void write_events_csv(std::ostream& out, const PointProcessPath& path);

/// Grid-path dump, columns (s, value).
void write_curve_csv(std::ostream& out, const Eigen::ArrayXd& values);

/// Run manifest: flat key=value lines echoing the configuration, plus
/// meta.* diagnostics and output.<name>.sha256 checksums. The configuration
/// keys reuse the CLI flag names so the manifest can be fed back through
/// --config to reproduce the run.
class RunManifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::uint64_t value);
  /// Record an output file and its checksum (name = basename).
  void add_output(const std::string& path);
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parse a flat key=value file ('#' starts a comment).
std::map<std::string, std::string> read_key_values(const std::string& path);

}  // namespace sclab
