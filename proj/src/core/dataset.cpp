#include "core/dataset.hpp"

#include <fstream>
#include <sstream>

#include "core/common.hpp"
#include "core/text.hpp"

namespace labelbias {

Dataset::Dataset(std::vector<std::string> column_names)
    : names_(std::move(column_names)), columns_(names_.size()) {
  for (size_t i = 0; i < names_.size(); ++i) {
    for (size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) {
        fail(ErrorCode::invalid_argument, "duplicate column name: " + names_[i]);
      }
    }
  }
}

int Dataset::index_of(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

bool Dataset::has_column(const std::string& name) const {
  return index_of(name) >= 0;
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) fail(ErrorCode::missing_feature, "no such column: " + name);
  return columns_[static_cast<size_t>(i)];
}

std::vector<double>& Dataset::column(const std::string& name) {
  int i = index_of(name);
  if (i < 0) fail(ErrorCode::missing_feature, "no such column: " + name);
  return columns_[static_cast<size_t>(i)];
}

void Dataset::append_row(const std::vector<double>& row) {
  if (row.size() != names_.size()) {
    fail(ErrorCode::length_mismatch, "row width does not match column count");
  }
  for (size_t i = 0; i < row.size(); ++i) columns_[i].push_back(row[i]);
  ++num_rows_;
}

void Dataset::add_column(const std::string& name, std::vector<double> values) {
  if (index_of(name) >= 0) {
    fail(ErrorCode::invalid_argument, "duplicate column name: " + name);
  }
  if (!names_.empty() && values.size() != num_rows_) {
    fail(ErrorCode::length_mismatch, "column length does not match row count");
  }
  if (names_.empty()) num_rows_ = values.size();
  names_.push_back(name);
  columns_.push_back(std::move(values));
}

void Dataset::set_role(const std::string& column_name, const std::string& role) {
  if (index_of(column_name) < 0) {
    fail(ErrorCode::missing_feature, "no such column: " + column_name);
  }
  roles_[column_name] = role;
}

std::string Dataset::role(const std::string& column_name) const {
  auto it = roles_.find(column_name);
  return it == roles_.end() ? std::string() : it->second;
}

Dataset Dataset::select_rows(const std::vector<size_t>& rows) const {
  Dataset out(names_);
  out.roles_ = roles_;
  for (size_t c = 0; c < columns_.size(); ++c) {
    out.columns_[c].reserve(rows.size());
    for (size_t r : rows) {
      if (r >= num_rows_) fail(ErrorCode::invalid_argument, "row index out of range");
      out.columns_[c].push_back(columns_[c][r]);
    }
  }
  out.num_rows_ = rows.size();
  return out;
}

Dataset Dataset::head(size_t n) const {
  std::vector<size_t> rows;
  for (size_t r = 0; r < std::min(n, num_rows_); ++r) rows.push_back(r);
  return select_rows(rows);
}

Dataset Dataset::tail_from(size_t start) const {
  std::vector<size_t> rows;
  for (size_t r = start; r < num_rows_; ++r) rows.push_back(r);
  return select_rows(rows);
}

std::string Dataset::to_csv() const {
  std::string out;
  for (size_t c = 0; c < names_.size(); ++c) {
    if (c) out += ',';
    out += names_[c];
  }
  out += '\n';
  for (size_t r = 0; r < num_rows_; ++r) {
    for (size_t c = 0; c < columns_.size(); ++c) {
      if (c) out += ',';
      out += format_double(columns_[c][r]);
    }
    out += '\n';
  }
  return out;
}

void Dataset::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open for writing: " + path);
  f << to_csv();
  if (!f) fail(ErrorCode::io_error, "write failed: " + path);
}

Dataset Dataset::from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorCode::parse_error, "empty CSV input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split(line, ',');
  for (auto& h : header) h = trim(h);
  Dataset d(header);
  size_t line_no = 1;
  std::vector<double> row(header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size()) {
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line_no) + ": expected " +
               std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    for (size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], &row[i])) {
        fail(ErrorCode::parse_error,
             "line " + std::to_string(line_no) + ", column '" + header[i] +
                 "': not a number: '" + trim(fields[i]) + "'");
      }
    }
    d.append_row(row);
  }
  return d;
}

Dataset Dataset::read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return from_csv_text(buf.str());
}

}  // namespace labelbias
