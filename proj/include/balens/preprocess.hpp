#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "balens/dataset.hpp"

namespace balens {

// Dataset restricted to the features whose missing fraction does not exceed
// `threshold`, plus the original indices of the dropped columns. A feature is
// removed only when strictly above the threshold, so exactly-at-threshold
// columns survive. Survivor order is preserved.
struct FilterResult {
  Dataset dataset;
  std::vector<std::size_t> dropped;
};

FilterResult filter_by_missingness(const Dataset& ds, double threshold);

// Fitted imputation state. Fill statistics are computed on a class-balanced
// view of the fitted data: the majority class is undersampled to the minority
// size (seeded by balance_seed) before medians and modes are taken.
struct ImputationPlan {
  struct Fill {
    double number = 0.0;  // median, numeric features
    std::string token;    // mode, categorical features
  };

  std::vector<FeatureSpec> source_schema;  // schema the plan was fitted on
  std::vector<std::size_t> retained;       // original indices that survive
  std::vector<std::size_t> dropped;        // original indices removed
  std::vector<Fill> fills;                 // parallel to retained
  std::uint64_t balance_seed = 0;
  // Features with no observed value in the balanced view, whose statistic
  // fell back to the full dataset.
  std::vector<std::string> fallback_features;
};

// Schema of a dataset after the plan has been applied: retained features
// only, reindexed from zero.
std::vector<FeatureSpec> planned_schema(const ImputationPlan& plan);

// Fit fill statistics for every feature of `ds` (nothing dropped). Numeric
// fills are medians (mean of the central pair on even counts), categorical
// fills are modes with lexicographic tie-breaking, both taken over the
// balanced view. A feature empty even in the full dataset raises
// AllMissingFeature; one empty only in the balanced view falls back to the
// full-dataset statistic and is recorded. Throws SingleClassDataset.
ImputationPlan build_imputation_plan(const Dataset& ds, std::uint64_t seed);

// Missingness filter and imputation fit in one step: features strictly above
// the threshold are dropped, fills are computed for the survivors.
ImputationPlan fit_preprocessor(const Dataset& ds, double threshold, std::uint64_t seed);

// Apply a fitted plan. Accepts either the schema the plan was fitted on
// (dropped columns removed, then missing cells filled) or the already
// filtered schema (fill only), so applying twice equals applying once. Any
// other schema raises SchemaMismatch.
Dataset apply_imputation(const Dataset& ds, const ImputationPlan& plan);

// One column of an encoded matrix and where it came from. Numeric features
// map to one column, categorical features to one indicator column per
// category, named "feature=category".
struct EncodedColumn {
  FeatureSpec origin;    // source feature
  std::string category;  // empty for numeric columns
  std::string name;

  bool operator==(const EncodedColumn&) const = default;
};

// Column layout fitted on one dataset so train and test encode identically.
// Categories are the sorted distinct tokens observed at fit time; a row
// carrying an unseen token encodes as an all-zero indicator group.
struct EncodingSchema {
  std::vector<FeatureSpec> source_schema;
  std::vector<EncodedColumn> columns;
};

struct EncodedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<EncodedColumn> columns;
  std::vector<int> labels;

  double at(std::size_t r, std::size_t c) const;
  std::span<const double> row(std::size_t r) const;
};

EncodingSchema encoding_schema(const Dataset& ds);

// Encode `ds` against a fitted layout. The dataset schema must match the one
// the layout was fitted on; missing cells raise MissingCellPresent, so
// imputation has to run first.
EncodedMatrix encode_with(const EncodingSchema& schema, const Dataset& ds);

// encoding_schema + encode_with in one step, for self-encoded data. Every
// categorical indicator group then sums to exactly 1 per row.
EncodedMatrix one_hot_encode(const Dataset& ds);

// Row subset of an encoded matrix, in the order given. Indices may repeat.
EncodedMatrix gather_rows(const EncodedMatrix& m, std::span<const std::size_t> rows);

}  // namespace balens
