#pragma once

// Poset file serialization and deterministic report sinks. Reports echo the
// schema version, tolerances and slack so a run is reproducible from its
// output alone; identical config + seed must produce byte-identical files.

#include <map>
#include <string>
#include <vector>

#include "eposets/poset.hpp"

namespace eposets {

/// Writes {"schema", "d", "family", "levels", "covers", "pi_d", ...}. Face
/// descriptors: sorted vertex-id arrays (simplicial) or RREF row matrices
/// with entries in 0..q-1 (q-simplicial).
void write_poset_json(const std::string& path, const GradedPoset& poset, const Measure& measure);

std::pair<GradedPoset, Measure> read_poset_json(const std::string& path);

/// Fixed-format float printing (%.17g) so reports are byte-stable.
std::string format_double(double v);

/// Tabular report accumulated in memory, flushed as CSV or JSON.
class Report {
 public:
  Report(std::string name, std::vector<std::string> columns);

  void set_meta(const std::string& key, const std::string& value);
  void add_row(std::vector<std::string> cells);

  std::string to_csv() const;
  std::string to_json() const;
  void write(const std::string& directory, const std::string& format) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace eposets
