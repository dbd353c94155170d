#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "balens/tree.hpp"

namespace balens {

// Enum values are stable: they feed the seed-splitting scheme, so reordering
// them would silently change every fitted model.
enum class EnsembleKind : std::uint64_t {
  BalancedRandomForest = 0,
  EasyEnsemble = 1,
  RUSBoost = 2,
  BalancedBagging = 3,
};

inline constexpr EnsembleKind kAllKinds[] = {
    EnsembleKind::BalancedRandomForest,
    EnsembleKind::EasyEnsemble,
    EnsembleKind::RUSBoost,
    EnsembleKind::BalancedBagging,
};

// Stable identifier used in serialized models.
std::string kind_name(EnsembleKind kind);
EnsembleKind kind_from_name(const std::string& name);  // throws InvalidArgument

struct Hyperparams {
  // Trees for the forest/bagging kinds, boosting rounds for RUSBoost,
  // subset count for EasyEnsemble.
  std::size_t n_estimators = 0;
  // Rounds per EasyEnsemble chain; unused by the other kinds.
  std::size_t boost_rounds = 0;
  TreeParams tree;

  bool operator==(const Hyperparams&) const = default;
};

// Reference-toolkit defaults: forest 100 trees, bagging 10, RUSBoost 50
// rounds, EasyEnsemble 10 subsets x 10 rounds; boosted kinds use depth-1
// stumps, the others unlimited depth.
Hyperparams default_hyperparams(EnsembleKind kind);

struct EnsembleMember {
  TreeModel tree;
  double alpha = 1.0;  // boosting stage weight; 1.0 for non-boosted members
  // Class counts of the subsample the tree was fit on.
  std::size_t train_pos = 0;
  std::size_t train_neg = 0;
};

struct EnsembleModel {
  EnsembleKind kind = EnsembleKind::BalancedRandomForest;
  std::vector<EnsembleMember> members;
  // EasyEnsemble only: members are grouped into per-subset chains laid out
  // contiguously; entry s is the length of chain s. Empty for other kinds.
  std::vector<std::size_t> subset_sizes;
  std::vector<double> importances;  // normalized, per encoded column
  Hyperparams params;               // effective values, after defaults resolve
  std::uint64_t seed = 0;
  std::vector<EncodedColumn> columns;  // encoded layout the model was fit on
};

// Fitters. All require both classes present (SingleClassDataset), at least
// two rows, and |X| == |y| (LengthMismatch). Every member derives its own
// child seed, so results do not depend on `threads`.

// Per tree: bootstrap of n rows, random under-sample within the bootstrap,
// fit with features_per_split = ceil(sqrt(q)) unless the params pin a count.
EnsembleModel fit_balanced_random_forest(const EncodedMatrix& X, std::span<const int> y,
                                         const Hyperparams& params, std::uint64_t seed,
                                         int threads = 1);

// Same resampling as the forest but every split sees all features.
EnsembleModel fit_balanced_bagging(const EncodedMatrix& X, std::span<const int> y,
                                   const Hyperparams& params, std::uint64_t seed,
                                   int threads = 1);

// Discrete AdaBoost over depth-limited trees. Round errors are always taken
// on the full (X, y) under the current normalized weights; with
// resample_each_round the stump itself is fit on a class-balanced
// weight-proportional under-sample drawn fresh each round. epsilon = 0 caps
// alpha at 10 and stops; epsilon >= 0.5 discards the round, retrying once
// when resampling, else stopping. A chain that would come out empty keeps
// the last fitted stump with alpha 0.
std::vector<EnsembleMember> fit_adaboost(const EncodedMatrix& X, std::span<const int> y,
                                         std::span<const double> weights_init,
                                         std::size_t rounds, std::uint64_t seed,
                                         bool resample_each_round,
                                         const TreeParams& tree_params = TreeParams{.max_depth = 1});

// AdaBoost with per-round balanced under-sampling (resample_each_round on).
EnsembleModel fit_rusboost(const EncodedMatrix& X, std::span<const int> y,
                           const Hyperparams& params, std::uint64_t seed);

// n_estimators independent balanced under-samples of the training set, one
// AdaBoost chain (boost_rounds rounds) per subset.
EnsembleModel fit_easy_ensemble(const EncodedMatrix& X, std::span<const int> y,
                                const Hyperparams& params, std::uint64_t seed,
                                int threads = 1);

EnsembleModel fit_ensemble(EnsembleKind kind, const EncodedMatrix& X, std::span<const int> y,
                           const Hyperparams& params, std::uint64_t seed, int threads = 1);

// Forest/bagging: mean of member tree scores. Boosted kinds: normalized
// weighted vote margin mapped onto [0,1]; EasyEnsemble averages the margin
// score over its chains. Throws DimensionMismatch.
double predict_score(const EnsembleModel& model, std::span<const double> x);

std::vector<double> predict_scores(const EnsembleModel& model, const EncodedMatrix& X,
                                   int threads = 1);

// Alpha-weighted mean of member importances (uniform for non-boosted kinds,
// whose alphas are all 1), renormalized to sum 1. All-zero when no member
// ever split.
std::vector<double> ensemble_importances(const EnsembleModel& model);

}  // namespace balens
