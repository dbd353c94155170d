#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "balens/csv.hpp"

namespace balens {

enum class FeatureKind { Numeric, Categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::size_t index = 0;

  bool operator==(const FeatureSpec&) const = default;
};

// Tabular cohort: a schema, an n x p cell grid where each cell is present or
// missing, and binary labels (1 = positive class). Categorical values are
// interned per column and kept as tokens until one-hot encoding. Instances
// are filled during construction and treated as immutable afterwards; const
// access is safe to share across threads.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<FeatureSpec> schema, std::vector<int> labels);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return schema_.size(); }
  const std::vector<FeatureSpec>& schema() const { return schema_; }
  const std::vector<int>& labels() const { return labels_; }

  bool is_missing(std::size_t row, std::size_t col) const;
  double numeric_at(std::size_t row, std::size_t col) const;
  const std::string& category_at(std::size_t row, std::size_t col) const;
  std::size_t missing_count(std::size_t col) const;

  // Construction-phase mutators; cells start out missing.
  void set_numeric(std::size_t row, std::size_t col, double value);
  void set_categorical(std::size_t row, std::size_t col, std::string_view token);

  Dataset subset(std::span<const std::size_t> row_indices) const;
  Dataset select_features(std::span<const std::size_t> feature_indices) const;

  // Cell-by-cell equality; category tables may differ in interning order.
  bool operator==(const Dataset& other) const;

 private:
  struct Column {
    std::vector<double> numeric;            // numeric kind; n entries
    std::vector<std::int32_t> codes;        // categorical kind; -1 while missing
    std::vector<std::string> categories;    // interned tokens, first-appearance order
    std::vector<std::uint8_t> missing;      // n entries
    std::size_t missing_total = 0;
  };

  void check_cell(std::size_t row, std::size_t col) const;

  std::vector<FeatureSpec> schema_;
  std::vector<Column> columns_;
  std::vector<int> labels_;
};

struct LoadOptions {
  std::string target_column;
  std::set<std::string> categorical_columns;
  std::set<std::string> missing_tokens = {"", "NA", "NaN"};
  std::string positive_token = "1";
  std::string negative_token = "0";
};

Dataset load_csv(const std::string& path, const LoadOptions& options);
Dataset dataset_from_csv(const CsvTable& table, const LoadOptions& options);
void write_csv(const Dataset& ds, const std::string& path, const std::string& target_column);

// Fraction of missing cells in one column, in [0, 1].
double missing_fraction(const Dataset& ds, std::size_t feature);

}  // namespace balens
