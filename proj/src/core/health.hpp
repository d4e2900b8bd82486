#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace labelbias {

// Column-to-block assignment rules for a patient-level CSV. Each rule maps a
// column name or '*' glob to one of: demographics, current_health, past_cost,
// future_cost, chronic_count, race, ignore. Rules apply in file order, first
// match wins, so specific names can precede a broad catch-all. Exactly one
// column must land in each of future_cost, chronic_count, and race.
struct ColumnMap {
  struct Rule {
    std::string pattern;
    std::string block;
  };
  std::vector<Rule> rules;

  static ColumnMap parse(const std::string& text);
  static ColumnMap load(const std::string& path);
  // Targets the publicly released synthetic care-management dataset.
  static ColumnMap builtin_default();
  static const char* builtin_default_text();

  // First matching block for a column, or "" when nothing matches.
  std::string block_for(const std::string& column) const;
};

// Patient table split into feature blocks. The complex model uses
// demographics + current_health + past_cost; the simple model uses
// current_health only. Race never enters a model; it is reported on.
struct HealthDataset {
  Dataset data;  // numeric; race recoded to 1 = black, 0 = otherwise
  std::vector<std::string> demographics;
  std::vector<std::string> current_health;
  std::vector<std::string> past_cost;
  std::string future_cost;
  std::string chronic_count;
  std::string race;
  int64_t dropped_rows = 0;

  std::vector<std::string> complex_features() const;
  std::vector<std::string> simple_features() const;
};

// Reads the CSV, applies the column map, recodes race (accepts black/white
// strings or numeric 0/1), and drops rows with missing values in any used
// column (count reported on the result).
HealthDataset load_health_dataset(const std::string& path, const ColumnMap& map);

struct EnrollmentCurves {
  struct Row {
    double capacity = 0.0;
    std::string model;  // "simple" | "complex"
    int64_t n_enrolled = 0;
    int64_t high_needs_enrolled = 0;
    double black_fraction = 0.0;
  };
  std::vector<double> capacities;
  std::vector<Row> rows;

  const Row& row(double capacity, const std::string& model) const;
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

struct EnrollmentConfig {
  std::vector<double> capacity_grid = {0.01, 0.02, 0.05, 0.10, 0.20, 0.30, 0.50};
  double ridge = 1e-6;           // tolerates collinear synthetic columns
  double chronic_threshold = 3;  // "high needs" = chronic count >= threshold
  uint64_t seed = 0;
};

// Fits complex and simple ridge regressions of future cost on a seeded 50/50
// split, ranks the held-out patients by score (ties broken by stable row
// index), and reports, per capacity, how many enrolled patients are
// high-needs and what fraction are Black.
EnrollmentCurves run_enrollment(const HealthDataset& d, const EnrollmentConfig& config);

}  // namespace labelbias
