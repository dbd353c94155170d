#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "balens/dataset.hpp"
#include "balens/ensemble.hpp"
#include "balens/metrics.hpp"
#include "balens/preprocess.hpp"
#include "balens/sampling.hpp"

namespace balens {

// Label used in printed tables ("B-RandomForest" etc).
std::string display_label(EnsembleKind kind);
// Directory-safe label used for per-classifier output files
// ("b_randomforest" etc).
std::string dir_label(EnsembleKind kind);
// Short command-line token ("brf", "easy", "rusboost", "bagging").
std::string cli_token(EnsembleKind kind);
EnsembleKind kind_from_cli_token(const std::string& token);  // throws ConfigInvalid

struct ExperimentConfig {
  // Order here is presentation order in tables and output files.
  std::vector<EnsembleKind> classifiers = {
      EnsembleKind::EasyEnsemble,
      EnsembleKind::RUSBoost,
      EnsembleKind::BalancedBagging,
      EnsembleKind::BalancedRandomForest,
  };
  std::size_t folds = 6;
  std::uint64_t seed = 0;
  // Imputation fitted once on the full dataset before splitting instead of
  // per training fold; deliberately leaky, kept for comparison runs.
  bool paper_mode = false;
  double missingness_threshold = 0.30;
  // Missing entries fall back to default_hyperparams(kind).
  std::map<EnsembleKind, Hyperparams> hyperparams;
  std::string dataset_source;  // provenance only
};

struct FoldResult {
  MetricsRecord metrics;
  ConfusionMatrix cm;
  RocCurve roc;
  // Importance mapped back onto the source dataset features (one-hot groups
  // summed, dropped features zero).
  std::vector<double> source_importances;
  std::vector<int> test_labels;
  std::vector<double> test_scores;
};

struct ClassifierReport {
  EnsembleKind kind = EnsembleKind::BalancedRandomForest;
  Hyperparams params;
  std::vector<FoldResult> folds;
  MetricsRecord mean;  // fieldwise fold mean
  double mean_auc = 0.0;
  ConfusionRates avg_confusion{};
  std::vector<double> avg_importances;  // fold mean, source-feature aligned
  RocCurve pooled_roc;                  // all folds' test scores pooled
};

struct EvalReport {
  ExperimentConfig config;
  std::vector<std::string> feature_names;  // source dataset schema order
  std::vector<ClassifierReport> classifiers;
  std::string timestamp;  // provenance only; never enters deterministic files
};

// The exact cross-validation split run_experiment derives from this config
// and label vector, exposed so callers can reconstruct per-fold row sets.
FoldPlan experiment_folds(const ExperimentConfig& config, std::span<const int> labels);

// Stratified K-fold driver: per fold an imputation plan is fitted on the
// training split only (or once globally in paper_mode), the fold is encoded
// with the training layout, every configured classifier is fitted and scored,
// and fold results are aggregated by unweighted means. Deterministic in
// (config, dataset); `threads` never changes results. Throws ConfigInvalid
// plus whatever the submodules raise.
EvalReport run_experiment(const ExperimentConfig& config, const Dataset& ds, int threads = 1);

// Sum encoded-column importances onto the original source features:
// column j contributes to retained[columns[j].origin.index]. Dropped
// features stay zero.
std::vector<double> map_importances_to_source(std::span<const EncodedColumn> columns,
                                              std::span<const double> encoded_importances,
                                              std::span<const std::size_t> retained,
                                              std::size_t source_count);

struct RankedFeature {
  std::string name;
  double score;
};

// Averaged importances of one classifier, sorted descending (ties by name),
// cut to top_k (0 = all). Throws EmptyReport when the report does not cover
// the requested kind.
std::vector<RankedFeature> rank_importances(const EvalReport& report, std::size_t top_k,
                                            EnsembleKind kind = EnsembleKind::BalancedRandomForest);

// Writes metrics.json, importance.csv, confusion_avg.csv, config_echo.json
// and per-classifier roc_fold{k}.csv / roc_pooled.csv files (under
// dir_label(kind)/ subdirectories) into out_dir, creating it if needed. Only
// config_echo.json carries the timestamp, so every other file is
// byte-deterministic. Throws IoError.
void write_report(const EvalReport& report, const std::string& out_dir);

}  // namespace balens
