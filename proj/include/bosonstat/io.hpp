#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bosonstat/common.hpp"
#include "bosonstat/design.hpp"
#include "bosonstat/hidden_dof.hpp"

// File schemas (all JSON files carry "schema_version"; CSV files carry a
// "# schema-version: 1" comment line). Number formatting is
// locale-independent ('.' decimal point).
namespace bosonstat::io {

// Matrix JSON: {"schema_version":1, "dim_rows":r, "dim_cols":c,
//  "entries": [[[re,im], ...], ...] (row-major), "unitary": bool}.
// The reader validates unitarity when the flag is set.
MatrixXcd read_matrix_json(const std::string& path);
void write_matrix_json(const std::string& path, const MatrixXcd& m, bool unitary_flag);

// Counts dataset: {"schema_version":1, "modes":m,
//  "input_sites":[...]?, "output_sites":[...]?,
//  "settings":[{"prepared_sites":[...],
//               "outcomes":[{"label": {"sites":[...]}|{"empty":true}|{"other":true},
//                            "count": n}]}]}.
struct OutcomeCount {
  enum class Kind { sites, empty, other };
  Kind kind = Kind::other;
  std::vector<int> sites;  // site labels, ascending; repeats = multiplicity
  long long count = 0;
};

struct SettingCounts {
  std::vector<int> prepared_sites;
  std::vector<OutcomeCount> outcomes;

  long long total() const;
  // Count of a specific label (0 when absent).
  long long count_of(OutcomeCount::Kind kind, const std::vector<int>& sites = {}) const;
};

struct CountsDataset {
  int modes = 0;
  std::vector<int> input_sites;   // optional (empty = undeclared)
  std::vector<int> output_sites;  // optional (empty = undeclared)
  std::vector<SettingCounts> settings;

  void validate() const;
};

CountsDataset read_counts_json(const std::string& path);
void write_counts_json(const std::string& path, const CountsDataset& dataset);

// Translation between the site-labelled dataset and the slot-indexed
// restricted counts used by the fit (requires input_sites/output_sites).
std::vector<design::RestrictedCounts> to_restricted_counts(const CountsDataset& dataset);
CountsDataset from_restricted_counts(const std::vector<design::RestrictedCounts>& data,
                                     int modes, const std::vector<int>& input_sites,
                                     const std::vector<int>& output_sites);

// Partition mixture: {"schema_version":1, "n":n,
//  "weights":[{"partition":[...], "p":w}]}.
hidden_dof::PartitionMixture read_mixture_json(const std::string& path);
void write_mixture_json(const std::string& path, const hidden_dof::PartitionMixture& mix);

// CSV writer: emits "# schema-version: 1", a header row, then rows; all
// numbers formatted with the classic locale.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace bosonstat::io
