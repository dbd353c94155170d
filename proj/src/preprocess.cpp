#include "balens/preprocess.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "balens/errors.hpp"
#include "balens/sampling.hpp"

namespace balens {

namespace {

std::optional<double> column_median(const Dataset& ds, std::size_t col) {
  std::vector<double> values;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    if (!ds.is_missing(r, col)) values.push_back(ds.numeric_at(r, col));
  }
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::optional<std::string> column_mode(const Dataset& ds, std::size_t col) {
  // Ordered map so the lexicographically smallest token wins count ties.
  std::map<std::string, std::size_t> counts;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    if (!ds.is_missing(r, col)) ++counts[ds.category_at(r, col)];
  }
  if (counts.empty()) return std::nullopt;
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [token, count] : counts) {
    if (count > best_count) {
      best = &token;
      best_count = count;
    }
  }
  return *best;
}

ImputationPlan fit_plan(const Dataset& ds, double threshold, std::uint64_t seed) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw InvalidArgument("missingness threshold must lie in [0,1]");
  }
  ImputationPlan plan;
  plan.source_schema = ds.schema();
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    (missing_fraction(ds, c) <= threshold ? plan.retained : plan.dropped).push_back(c);
  }
  plan.balance_seed = seed;

  Rng rng(seed);
  const IndexSample balanced_rows = random_undersample(ds.labels(), rng);
  const Dataset balanced = ds.subset(balanced_rows.indices);

  plan.fills.reserve(plan.retained.size());
  for (const std::size_t c : plan.retained) {
    ImputationPlan::Fill fill;
    if (ds.schema()[c].kind == FeatureKind::Numeric) {
      auto value = column_median(balanced, c);
      if (!value) {
        value = column_median(ds, c);
        plan.fallback_features.push_back(ds.schema()[c].name);
      }
      if (!value) throw AllMissingFeature(ds.schema()[c].name);
      fill.number = *value;
    } else {
      auto token = column_mode(balanced, c);
      if (!token) {
        token = column_mode(ds, c);
        plan.fallback_features.push_back(ds.schema()[c].name);
      }
      if (!token) throw AllMissingFeature(ds.schema()[c].name);
      fill.token = *token;
    }
    plan.fills.push_back(std::move(fill));
  }
  return plan;
}

}  // namespace

FilterResult filter_by_missingness(const Dataset& ds, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw InvalidArgument("missingness threshold must lie in [0,1]");
  }
  std::vector<std::size_t> retained;
  std::vector<std::size_t> dropped;
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    (missing_fraction(ds, c) <= threshold ? retained : dropped).push_back(c);
  }
  return {ds.select_features(retained), std::move(dropped)};
}

std::vector<FeatureSpec> planned_schema(const ImputationPlan& plan) {
  std::vector<FeatureSpec> out;
  out.reserve(plan.retained.size());
  for (std::size_t i = 0; i < plan.retained.size(); ++i) {
    const FeatureSpec& src = plan.source_schema[plan.retained[i]];
    out.push_back({src.name, src.kind, i});
  }
  return out;
}

ImputationPlan build_imputation_plan(const Dataset& ds, std::uint64_t seed) {
  return fit_plan(ds, 1.0, seed);
}

ImputationPlan fit_preprocessor(const Dataset& ds, double threshold, std::uint64_t seed) {
  return fit_plan(ds, threshold, seed);
}

Dataset apply_imputation(const Dataset& ds, const ImputationPlan& plan) {
  Dataset filtered = [&] {
    if (ds.schema() == plan.source_schema) return ds.select_features(plan.retained);
    if (ds.schema() == planned_schema(plan)) return ds;
    throw SchemaMismatch(
        "apply_imputation: dataset matches neither the fitted nor the filtered schema");
  }();
  for (std::size_t i = 0; i < plan.retained.size(); ++i) {
    const bool numeric = filtered.schema()[i].kind == FeatureKind::Numeric;
    for (std::size_t r = 0; r < filtered.rows(); ++r) {
      if (!filtered.is_missing(r, i)) continue;
      if (numeric) {
        filtered.set_numeric(r, i, plan.fills[i].number);
      } else {
        filtered.set_categorical(r, i, plan.fills[i].token);
      }
    }
  }
  return filtered;
}

double EncodedMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows) throw IndexOutOfRange("row index " + std::to_string(r));
  if (c >= cols) throw IndexOutOfRange("column index " + std::to_string(c));
  return values[r * cols + c];
}

std::span<const double> EncodedMatrix::row(std::size_t r) const {
  if (r >= rows) throw IndexOutOfRange("row index " + std::to_string(r));
  return {values.data() + r * cols, cols};
}

EncodingSchema encoding_schema(const Dataset& ds) {
  EncodingSchema schema;
  schema.source_schema = ds.schema();
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    const FeatureSpec& spec = ds.schema()[c];
    if (spec.kind == FeatureKind::Numeric) {
      schema.columns.push_back({spec, "", spec.name});
      continue;
    }
    std::vector<std::string> categories;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      if (ds.is_missing(r, c)) continue;
      const std::string& token = ds.category_at(r, c);
      if (std::find(categories.begin(), categories.end(), token) == categories.end()) {
        categories.push_back(token);
      }
    }
    std::sort(categories.begin(), categories.end());
    for (auto& token : categories) {
      std::string name = spec.name + "=" + token;
      schema.columns.push_back({spec, std::move(token), std::move(name)});
    }
  }
  return schema;
}

EncodedMatrix encode_with(const EncodingSchema& schema, const Dataset& ds) {
  if (ds.schema() != schema.source_schema) {
    throw SchemaMismatch("encode_with: dataset schema differs from the fitted layout");
  }
  // Per-feature dispatch: numeric target column, or token -> column lookup.
  std::vector<std::size_t> numeric_target(ds.cols(), schema.columns.size());
  std::vector<std::unordered_map<std::string, std::size_t>> category_target(ds.cols());
  for (std::size_t j = 0; j < schema.columns.size(); ++j) {
    const EncodedColumn& col = schema.columns[j];
    if (col.origin.kind == FeatureKind::Numeric) {
      numeric_target[col.origin.index] = j;
    } else {
      category_target[col.origin.index].emplace(col.category, j);
    }
  }

  EncodedMatrix m;
  m.rows = ds.rows();
  m.cols = schema.columns.size();
  m.columns = schema.columns;
  m.labels = ds.labels();
  m.values.assign(m.rows * m.cols, 0.0);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    double* row = m.values.data() + r * m.cols;
    for (std::size_t c = 0; c < ds.cols(); ++c) {
      if (ds.is_missing(r, c)) {
        throw MissingCellPresent("row " + std::to_string(r) + ", feature " + ds.schema()[c].name);
      }
      if (ds.schema()[c].kind == FeatureKind::Numeric) {
        row[numeric_target[c]] = ds.numeric_at(r, c);
      } else {
        const auto hit = category_target[c].find(ds.category_at(r, c));
        if (hit != category_target[c].end()) row[hit->second] = 1.0;
        // Unseen category: the whole indicator group stays zero.
      }
    }
  }
  return m;
}

EncodedMatrix one_hot_encode(const Dataset& ds) {
  return encode_with(encoding_schema(ds), ds);
}

EncodedMatrix gather_rows(const EncodedMatrix& m, std::span<const std::size_t> rows) {
  EncodedMatrix out;
  out.rows = rows.size();
  out.cols = m.cols;
  out.columns = m.columns;
  out.values.reserve(rows.size() * m.cols);
  const bool has_labels = m.labels.size() == m.rows;
  if (has_labels) out.labels.reserve(rows.size());
  for (const std::size_t r : rows) {
    if (r >= m.rows) throw IndexOutOfRange("row index " + std::to_string(r));
    const auto src = m.row(r);
    out.values.insert(out.values.end(), src.begin(), src.end());
    if (has_labels) out.labels.push_back(m.labels[r]);
  }
  return out;
}

}  // namespace balens
