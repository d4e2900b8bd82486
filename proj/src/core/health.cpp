#include "core/health.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "core/common.hpp"
#include "core/estimators.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace labelbias {

namespace {

const char* kBlocks[] = {"demographics", "current_health", "past_cost",
                         "future_cost",  "chronic_count",  "race",
                         "ignore"};

bool is_known_block(const std::string& b) {
  for (const char* k : kBlocks) {
    if (b == k) return true;
  }
  return false;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

ColumnMap ColumnMap::parse(const std::string& text) {
  ColumnMap map;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::parse_error,
           "column map line " + std::to_string(line_no) + ": expected 'pattern = block'");
    }
    Rule rule{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (rule.pattern.empty()) {
      fail(ErrorCode::parse_error, "column map line " + std::to_string(line_no) + ": empty pattern");
    }
    if (!is_known_block(rule.block)) {
      fail(ErrorCode::parse_error, "column map line " + std::to_string(line_no) +
                                       ": unknown block '" + rule.block + "'");
    }
    map.rules.push_back(std::move(rule));
  }
  if (map.rules.empty()) fail(ErrorCode::parse_error, "column map has no rules");
  return map;
}

ColumnMap ColumnMap::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open column map: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse(buf.str());
}

const char* ColumnMap::builtin_default_text() {
  return R"(# Column map for the released synthetic care-management dataset.
# Rules apply top to bottom; the first matching rule assigns the block.
# Columns matching no rule are left out of the analysis.

# outcomes and reporting columns (measured in year t)
cost_t = future_cost
gagne_sum_t = chronic_count
race = race

# predictors available at the enrollment decision (measured in year t-1)
dem_female = demographics
dem_age_band_* = demographics
cost_*_tm1 = past_cost
gagne_sum_tm1 = current_health
*_tm1 = current_health
)";
}

ColumnMap ColumnMap::builtin_default() { return parse(builtin_default_text()); }

std::string ColumnMap::block_for(const std::string& column) const {
  for (const auto& rule : rules) {
    if (glob_match(rule.pattern, column)) return rule.block;
  }
  return "";
}

std::vector<std::string> HealthDataset::complex_features() const {
  std::vector<std::string> out = demographics;
  out.insert(out.end(), current_health.begin(), current_health.end());
  out.insert(out.end(), past_cost.begin(), past_cost.end());
  return out;
}

std::vector<std::string> HealthDataset::simple_features() const { return current_health; }

namespace {

struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawCsv read_raw_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open file: " + path);
  RawCsv out;
  std::string line;
  bool have_header = false;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (trim(line).empty()) continue;
      out.header = split(line, ',');
      for (auto& h : out.header) h = trim(h);
      have_header = true;
      continue;
    }
    if (trim(line).empty()) continue;
    out.rows.push_back(split(line, ','));
  }
  if (!have_header) {
    fail(ErrorCode::empty_after_filtering, "no rows (or header) in: " + path);
  }
  return out;
}

bool is_missing(const std::string& field) {
  std::string t = lower(trim(field));
  return t.empty() || t == "na" || t == "nan" || t == "null";
}

// numeric cell, race cells mapped to 1 = black / 0 = white
bool parse_cell(const std::string& field, bool is_race, double* out) {
  if (is_missing(field)) return false;
  if (is_race) {
    std::string t = lower(trim(field));
    if (t == "black") {
      *out = 1.0;
      return true;
    }
    if (t == "white") {
      *out = 0.0;
      return true;
    }
  }
  return parse_double(field, out) && std::isfinite(*out);
}

}  // namespace

HealthDataset load_health_dataset(const std::string& path, const ColumnMap& map) {
  RawCsv raw = read_raw_csv(path);

  HealthDataset out;
  std::vector<int> used_cols;        // indices into raw.header
  std::vector<std::string> used_names;
  std::vector<bool> used_is_race;
  std::vector<bool> matched(map.rules.size(), false);

  for (size_t c = 0; c < raw.header.size(); ++c) {
    const std::string& name = raw.header[c];
    std::string block;
    for (size_t r = 0; r < map.rules.size(); ++r) {
      if (glob_match(map.rules[r].pattern, name)) {
        block = map.rules[r].block;
        matched[r] = true;
        break;
      }
    }
    if (block.empty() || block == "ignore") continue;
    if (block == "demographics") {
      out.demographics.push_back(name);
    } else if (block == "current_health") {
      out.current_health.push_back(name);
    } else if (block == "past_cost") {
      out.past_cost.push_back(name);
    } else if (block == "future_cost") {
      if (!out.future_cost.empty()) {
        fail(ErrorCode::invalid_config, "two columns mapped to future_cost: " + out.future_cost +
                                            " and " + name);
      }
      out.future_cost = name;
    } else if (block == "chronic_count") {
      if (!out.chronic_count.empty()) {
        fail(ErrorCode::invalid_config, "two columns mapped to chronic_count: " +
                                            out.chronic_count + " and " + name);
      }
      out.chronic_count = name;
    } else if (block == "race") {
      if (!out.race.empty()) {
        fail(ErrorCode::invalid_config, "two columns mapped to race: " + out.race + " and " + name);
      }
      out.race = name;
    }
    used_cols.push_back(static_cast<int>(c));
    used_names.push_back(name);
    used_is_race.push_back(block == "race");
  }

  for (size_t r = 0; r < map.rules.size(); ++r) {
    if (!matched[r] && map.rules[r].block != "ignore") {
      fail(ErrorCode::unmapped_column,
           "column map rule '" + map.rules[r].pattern + "' matches no column in " + path);
    }
  }
  if (out.future_cost.empty()) {
    fail(ErrorCode::unmapped_column, "no column mapped to future_cost");
  }
  if (out.chronic_count.empty()) {
    fail(ErrorCode::unmapped_column, "no column mapped to chronic_count");
  }
  if (out.race.empty()) {
    fail(ErrorCode::unmapped_column, "no column mapped to race");
  }
  if (out.current_health.empty()) {
    fail(ErrorCode::unmapped_column, "no columns mapped to current_health");
  }

  Dataset data(used_names);
  std::vector<double> row(used_names.size());
  int64_t dropped = 0;
  for (const auto& fields : raw.rows) {
    if (fields.size() != raw.header.size()) {
      fail(ErrorCode::parse_error, "ragged CSV row with " + std::to_string(fields.size()) +
                                       " fields (header has " + std::to_string(raw.header.size()) +
                                       ") in " + path);
    }
    bool ok = true;
    for (size_t i = 0; i < used_cols.size(); ++i) {
      if (!parse_cell(fields[static_cast<size_t>(used_cols[i])], used_is_race[i], &row[i])) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    data.append_row(row);
  }
  if (data.num_rows() == 0) {
    fail(ErrorCode::empty_after_filtering,
         "no usable rows in " + path + " (" + std::to_string(dropped) + " dropped)");
  }

  out.data = std::move(data);
  out.dropped_rows = dropped;
  return out;
}

const EnrollmentCurves::Row& EnrollmentCurves::row(double capacity, const std::string& model) const {
  for (const auto& r : rows) {
    if (r.capacity == capacity && r.model == model) return r;
  }
  fail(ErrorCode::invalid_argument,
       "no enrollment row for capacity=" + format_double(capacity) + " model=" + model);
}

std::string EnrollmentCurves::to_csv() const {
  std::string out = "capacity,model,n_enrolled,high_needs_enrolled,black_fraction\n";
  for (const auto& r : rows) {
    out += format_double(r.capacity);
    out += ',';
    out += r.model;
    out += ',';
    out += std::to_string(r.n_enrolled);
    out += ',';
    out += std::to_string(r.high_needs_enrolled);
    out += ',';
    out += format_double(r.black_fraction);
    out += '\n';
  }
  return out;
}

void EnrollmentCurves::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open for writing: " + path);
  f << to_csv();
  if (!f) fail(ErrorCode::io_error, "write failed: " + path);
}

EnrollmentCurves run_enrollment(const HealthDataset& d, const EnrollmentConfig& config) {
  if (config.capacity_grid.empty()) fail(ErrorCode::invalid_argument, "capacity grid is empty");
  for (size_t i = 0; i < config.capacity_grid.size(); ++i) {
    double k = config.capacity_grid[i];
    if (!(k > 0.0 && k <= 1.0)) {
      fail(ErrorCode::invalid_argument,
           "capacity " + format_double(k) + " outside (0, 1]");
    }
    if (i > 0 && !(k > config.capacity_grid[i - 1])) {
      fail(ErrorCode::invalid_argument, "capacity grid must be strictly increasing");
    }
  }
  if (config.ridge < 0.0) fail(ErrorCode::invalid_argument, "ridge penalty must be >= 0");
  if (d.data.num_rows() < 8) fail(ErrorCode::invalid_argument, "too few patients to split");

  std::vector<size_t> order(d.data.num_rows());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng split_rng(derive_seed(config.seed, {30, 0}));
  split_rng.shuffle(order);
  size_t n_train = order.size() / 2;
  Dataset train = d.data.select_rows({order.begin(), order.begin() + static_cast<long>(n_train)});
  Dataset test = d.data.select_rows({order.begin() + static_cast<long>(n_train), order.end()});

  ModelFit complex_fit = fit_linear(train, d.future_cost, d.complex_features(), config.ridge);
  ModelFit simple_fit = fit_linear(train, d.future_cost, d.simple_features(), config.ridge);

  const std::vector<double>& chronic = test.column(d.chronic_count);
  const std::vector<double>& race = test.column(d.race);

  EnrollmentCurves curves;
  curves.capacities = config.capacity_grid;
  for (const char* model : {"simple", "complex"}) {
    std::vector<double> scores =
        predict(model == std::string("simple") ? simple_fit : complex_fit, test);
    std::vector<size_t> rank(test.num_rows());
    std::iota(rank.begin(), rank.end(), size_t{0});
    // highest score first; stable sort keeps row order on ties
    std::stable_sort(rank.begin(), rank.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    for (double k : config.capacity_grid) {
      auto m = static_cast<size_t>(std::floor(k * static_cast<double>(test.num_rows())));
      int64_t high_needs = 0, black = 0;
      for (size_t i = 0; i < m; ++i) {
        size_t r = rank[i];
        if (chronic[r] >= config.chronic_threshold) ++high_needs;
        if (race[r] == 1.0) ++black;
      }
      EnrollmentCurves::Row row;
      row.capacity = k;
      row.model = model;
      row.n_enrolled = static_cast<int64_t>(m);
      row.high_needs_enrolled = high_needs;
      row.black_fraction = m > 0 ? static_cast<double>(black) / static_cast<double>(m) : 0.0;
      curves.rows.push_back(std::move(row));
    }
  }
  return curves;
}

}  // namespace labelbias
