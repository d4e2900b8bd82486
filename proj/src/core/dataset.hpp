#pragma once

#include <map>
#include <string>
#include <vector>

namespace labelbias {

// Rectangular numeric table with named columns. Column storage is
// column-major; all values are doubles (indicator columns hold 0/1).
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<std::string> column_names);

  size_t num_rows() const { return num_rows_; }
  size_t num_cols() const { return names_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }
  bool has_column(const std::string& name) const;

  const std::vector<double>& column(const std::string& name) const;
  std::vector<double>& column(const std::string& name);

  // Appends a full row in column order.
  void append_row(const std::vector<double>& row);
  void add_column(const std::string& name, std::vector<double> values);

  // Role annotations (e.g. proxy_label, latent) carried alongside columns.
  void set_role(const std::string& column_name, const std::string& role);
  std::string role(const std::string& column_name) const;
  const std::map<std::string, std::string>& roles() const { return roles_; }

  Dataset select_rows(const std::vector<size_t>& rows) const;
  Dataset head(size_t n) const;
  Dataset tail_from(size_t start) const;

  // CSV with a header row; numbers in shortest round-trip decimal form.
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
  static Dataset read_csv(const std::string& path);
  static Dataset from_csv_text(const std::string& text);

 private:
  int index_of(const std::string& name) const;  // -1 when absent

  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::map<std::string, std::string> roles_;
  size_t num_rows_ = 0;
};

}  // namespace labelbias
