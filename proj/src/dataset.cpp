#include "balens/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "balens/errors.hpp"
#include "balens/text.hpp"

namespace balens {

Dataset::Dataset(std::vector<FeatureSpec> schema, std::vector<int> labels)
    : schema_(std::move(schema)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].index != i) {
      throw InvalidArgument("schema indices must be contiguous from 0");
    }
    for (std::size_t j = i + 1; j < schema_.size(); ++j) {
      if (schema_[i].name == schema_[j].name) {
        throw InvalidArgument("duplicate feature name: " + schema_[i].name);
      }
    }
  }
  for (const int label : labels_) {
    if (label != 0 && label != 1) throw InvalidArgument("labels must be 0 or 1");
  }
  columns_.resize(schema_.size());
  const std::size_t n = labels_.size();
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    Column& col = columns_[c];
    col.missing.assign(n, 1);
    col.missing_total = n;
    if (schema_[c].kind == FeatureKind::Numeric) {
      col.numeric.assign(n, 0.0);
    } else {
      col.codes.assign(n, -1);
    }
  }
}

void Dataset::check_cell(std::size_t row, std::size_t col) const {
  if (col >= schema_.size()) throw IndexOutOfRange("feature index " + std::to_string(col));
  if (row >= labels_.size()) throw IndexOutOfRange("row index " + std::to_string(row));
}

bool Dataset::is_missing(std::size_t row, std::size_t col) const {
  check_cell(row, col);
  return columns_[col].missing[row] != 0;
}

double Dataset::numeric_at(std::size_t row, std::size_t col) const {
  check_cell(row, col);
  if (schema_[col].kind != FeatureKind::Numeric) {
    throw InvalidArgument("column " + schema_[col].name + " is not numeric");
  }
  return columns_[col].numeric[row];
}

const std::string& Dataset::category_at(std::size_t row, std::size_t col) const {
  check_cell(row, col);
  if (schema_[col].kind != FeatureKind::Categorical) {
    throw InvalidArgument("column " + schema_[col].name + " is not categorical");
  }
  return columns_[col].categories[static_cast<std::size_t>(columns_[col].codes[row])];
}

std::size_t Dataset::missing_count(std::size_t col) const {
  if (col >= schema_.size()) throw IndexOutOfRange("feature index " + std::to_string(col));
  return columns_[col].missing_total;
}

void Dataset::set_numeric(std::size_t row, std::size_t col, double value) {
  check_cell(row, col);
  if (schema_[col].kind != FeatureKind::Numeric) {
    throw InvalidArgument("column " + schema_[col].name + " is not numeric");
  }
  if (!std::isfinite(value)) throw InvalidArgument("numeric cells must be finite");
  Column& c = columns_[col];
  if (c.missing[row]) --c.missing_total;
  c.missing[row] = 0;
  c.numeric[row] = value;
}

void Dataset::set_categorical(std::size_t row, std::size_t col, std::string_view token) {
  check_cell(row, col);
  if (schema_[col].kind != FeatureKind::Categorical) {
    throw InvalidArgument("column " + schema_[col].name + " is not categorical");
  }
  Column& c = columns_[col];
  std::int32_t code = -1;
  for (std::size_t k = 0; k < c.categories.size(); ++k) {
    if (c.categories[k] == token) {
      code = static_cast<std::int32_t>(k);
      break;
    }
  }
  if (code < 0) {
    code = static_cast<std::int32_t>(c.categories.size());
    c.categories.emplace_back(token);
  }
  if (c.missing[row]) --c.missing_total;
  c.missing[row] = 0;
  c.codes[row] = code;
}

Dataset Dataset::subset(std::span<const std::size_t> row_indices) const {
  std::vector<int> labels;
  labels.reserve(row_indices.size());
  for (const std::size_t r : row_indices) {
    if (r >= rows()) throw IndexOutOfRange("row index " + std::to_string(r));
    labels.push_back(labels_[r]);
  }
  Dataset out(schema_, std::move(labels));
  for (std::size_t c = 0; c < cols(); ++c) {
    for (std::size_t i = 0; i < row_indices.size(); ++i) {
      const std::size_t r = row_indices[i];
      if (columns_[c].missing[r]) continue;
      if (schema_[c].kind == FeatureKind::Numeric) {
        out.set_numeric(i, c, columns_[c].numeric[r]);
      } else {
        out.set_categorical(i, c, category_at(r, c));
      }
    }
  }
  return out;
}

Dataset Dataset::select_features(std::span<const std::size_t> feature_indices) const {
  std::vector<FeatureSpec> schema;
  schema.reserve(feature_indices.size());
  for (std::size_t i = 0; i < feature_indices.size(); ++i) {
    const std::size_t c = feature_indices[i];
    if (c >= cols()) throw IndexOutOfRange("feature index " + std::to_string(c));
    schema.push_back({schema_[c].name, schema_[c].kind, i});
  }
  Dataset out(std::move(schema), labels_);
  for (std::size_t i = 0; i < feature_indices.size(); ++i) {
    const std::size_t c = feature_indices[i];
    for (std::size_t r = 0; r < rows(); ++r) {
      if (columns_[c].missing[r]) continue;
      if (schema_[c].kind == FeatureKind::Numeric) {
        out.set_numeric(r, i, columns_[c].numeric[r]);
      } else {
        out.set_categorical(r, i, category_at(r, c));
      }
    }
  }
  return out;
}

bool Dataset::operator==(const Dataset& other) const {
  if (schema_ != other.schema_ || labels_ != other.labels_) return false;
  for (std::size_t c = 0; c < cols(); ++c) {
    for (std::size_t r = 0; r < rows(); ++r) {
      const bool miss = columns_[c].missing[r] != 0;
      if (miss != (other.columns_[c].missing[r] != 0)) return false;
      if (miss) continue;
      if (schema_[c].kind == FeatureKind::Numeric) {
        if (columns_[c].numeric[r] != other.columns_[c].numeric[r]) return false;
      } else {
        if (category_at(r, c) != other.category_at(r, c)) return false;
      }
    }
  }
  return true;
}

Dataset dataset_from_csv(const CsvTable& table, const LoadOptions& options) {
  const auto& header = table.header;
  std::size_t target_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == options.target_column) {
      target_col = i;
      break;
    }
  }
  if (target_col == header.size()) {
    throw UnknownTarget("target column '" + options.target_column + "' not in header");
  }
  for (const auto& name : options.categorical_columns) {
    if (name == options.target_column) {
      throw InvalidArgument("target column cannot be categorical: " + name);
    }
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw InvalidArgument("categorical column '" + name + "' not in header");
    }
  }

  std::vector<FeatureSpec> schema;
  std::vector<std::size_t> source_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == target_col) continue;
    const FeatureKind kind = options.categorical_columns.count(header[i])
                                 ? FeatureKind::Categorical
                                 : FeatureKind::Numeric;
    schema.push_back({header[i], kind, schema.size()});
    source_cols.push_back(i);
  }

  std::vector<int> labels;
  labels.reserve(table.records.size());
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const std::string& token = table.records[r][target_col];
    if (token == options.positive_token) {
      labels.push_back(1);
    } else if (token == options.negative_token) {
      labels.push_back(0);
    } else {
      throw UnparsableLabel("row " + std::to_string(r + 1) + ": target value '" + token + "'");
    }
  }

  Dataset ds(std::move(schema), std::move(labels));
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    for (std::size_t c = 0; c < source_cols.size(); ++c) {
      const std::string& token = table.records[r][source_cols[c]];
      if (options.missing_tokens.count(token)) continue;
      if (ds.schema()[c].kind == FeatureKind::Numeric) {
        const auto value = parse_double(token);
        if (!value) {
          throw NonNumericValue("row " + std::to_string(r + 1) + ", column '" +
                                ds.schema()[c].name + "': '" + token + "'");
        }
        ds.set_numeric(r, c, *value);
      } else {
        ds.set_categorical(r, c, token);
      }
    }
  }
  return ds;
}

Dataset load_csv(const std::string& path, const LoadOptions& options) {
  return dataset_from_csv(read_csv_file(path), options);
}

void write_csv(const Dataset& ds, const std::string& path, const std::string& target_column) {
  std::vector<std::string> header;
  header.reserve(ds.cols() + 1);
  for (const auto& spec : ds.schema()) header.push_back(spec.name);
  header.push_back(target_column);

  std::vector<std::vector<std::string>> records(ds.rows());
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    auto& row = records[r];
    row.reserve(ds.cols() + 1);
    for (std::size_t c = 0; c < ds.cols(); ++c) {
      if (ds.is_missing(r, c)) {
        row.emplace_back();
      } else if (ds.schema()[c].kind == FeatureKind::Numeric) {
        row.push_back(format_double(ds.numeric_at(r, c)));
      } else {
        row.push_back(ds.category_at(r, c));
      }
    }
    row.push_back(ds.labels()[r] ? "1" : "0");
  }
  write_csv_file(path, header, records);
}

double missing_fraction(const Dataset& ds, std::size_t feature) {
  if (feature >= ds.cols()) throw IndexOutOfRange("feature index " + std::to_string(feature));
  if (ds.rows() == 0) return 0.0;
  return static_cast<double>(ds.missing_count(feature)) / static_cast<double>(ds.rows());
}

}  // namespace balens
