#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "balens/preprocess.hpp"
#include "balens/rng.hpp"

namespace balens {

struct TreeParams {
  std::size_t max_depth = 0;          // 0 = unlimited
  std::size_t min_split = 2;          // smallest node still considered for a split
  std::size_t min_leaf = 1;           // smallest row count allowed on either side
  std::size_t features_per_split = 0; // 0 = all columns; otherwise a random subset per node

  bool operator==(const TreeParams&) const = default;
};

// Split node (feature >= 0, both children set) or leaf (feature < 0).
// Weighted class totals are kept on every node; leaves use them as the
// prediction value (positive fraction).
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double weight_pos = 0.0;
  double weight_neg = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::unique_ptr<TreeNode> root;
  TreeParams params;
  // Normalized mean-decrease-in-impurity per input column; sums to 1, or is
  // all zero for a single-leaf tree. Its length is the model's column count.
  std::vector<double> importances;

  std::size_t columns() const { return importances.size(); }
  std::size_t depth() const;       // longest root-to-leaf edge count
  std::size_t node_count() const;
};

// Greedy CART fit on weighted rows: at each node the best (feature,
// threshold) pair by weighted Gini impurity is chosen among midpoints of
// consecutive distinct values, ties broken toward the lowest feature index
// and then the lowest threshold. Any separating split is accepted, so
// constant-gain levels (parity-style data) still split. Stops on purity,
// min_split, max_depth, or when no candidate separates the node.
// Throws EmptyInput, NegativeWeight, LengthMismatch, InvalidArgument (zero
// total weight, labels outside {0,1}).
TreeModel fit_tree(const EncodedMatrix& X, std::span<const int> y,
                   std::span<const double> sample_weights, const TreeParams& params, Rng& rng);

// Uniform-weight convenience overload.
TreeModel fit_tree(const EncodedMatrix& X, std::span<const int> y, const TreeParams& params,
                   Rng& rng);

// Routes x to a leaf (x[feature] < threshold goes left) and returns the
// leaf's weighted positive fraction, 0.5 when the leaf carries no weight.
// Throws DimensionMismatch.
double predict_tree(const TreeModel& model, std::span<const double> x);

// score >= 0.5 maps to the positive class, so exact ties vote positive.
inline int hard_label(double score) { return score >= 0.5 ? 1 : 0; }

const std::vector<double>& tree_importances(const TreeModel& model);

}  // namespace balens
