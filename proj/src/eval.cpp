#include "balens/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <utility>

#include <json.hpp>

#include "balens/csv.hpp"
#include "balens/errors.hpp"
#include "balens/parallel.hpp"
#include "balens/rng.hpp"
#include "balens/sampling.hpp"
#include "balens/text.hpp"
#include "balens/tree.hpp"

namespace balens {

namespace {

// Stream ids splitting the experiment seed into independent stages. Values
// are stable; reordering them would silently change every result.
constexpr std::uint64_t kStreamFolds = 1;
constexpr std::uint64_t kStreamImpute = 2;
constexpr std::uint64_t kStreamFit = 3;

}  // namespace

std::string display_label(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::BalancedRandomForest: return "B-RandomForest";
    case EnsembleKind::EasyEnsemble: return "E-Ensemble";
    case EnsembleKind::RUSBoost: return "B-Boosting";
    case EnsembleKind::BalancedBagging: return "B-Bagging";
  }
  throw InvalidArgument("display_label: unknown ensemble kind");
}

std::string dir_label(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::BalancedRandomForest: return "b_randomforest";
    case EnsembleKind::EasyEnsemble: return "e_ensemble";
    case EnsembleKind::RUSBoost: return "b_boosting";
    case EnsembleKind::BalancedBagging: return "b_bagging";
  }
  throw InvalidArgument("dir_label: unknown ensemble kind");
}

std::string cli_token(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::BalancedRandomForest: return "brf";
    case EnsembleKind::EasyEnsemble: return "easy";
    case EnsembleKind::RUSBoost: return "rusboost";
    case EnsembleKind::BalancedBagging: return "bagging";
  }
  throw InvalidArgument("cli_token: unknown ensemble kind");
}

EnsembleKind kind_from_cli_token(const std::string& token) {
  for (EnsembleKind kind : kAllKinds) {
    if (token == cli_token(kind)) return kind;
  }
  throw ConfigInvalid("unknown classifier '" + token +
                      "' (expected easy, rusboost, bagging or brf)");
}

namespace {

std::string iso_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// One fold's data after leakage-safe preparation: imputation and encoding
// are fitted on the training split and replayed on the test split.
struct FoldData {
  EncodedMatrix train;
  EncodedMatrix test;
  std::vector<std::size_t> retained;  // original feature indices kept
};

void validate_config(const ExperimentConfig& config) {
  if (config.folds < 2) throw ConfigInvalid("folds must be at least 2");
  if (!(config.missingness_threshold >= 0.0 && config.missingness_threshold <= 1.0)) {
    throw ConfigInvalid("missingness threshold must lie in [0, 1]");
  }
  if (config.classifiers.empty()) throw ConfigInvalid("no classifiers selected");
  std::set<EnsembleKind> seen;
  for (EnsembleKind kind : config.classifiers) {
    if (!seen.insert(kind).second) {
      throw ConfigInvalid("classifier '" + cli_token(kind) + "' listed twice");
    }
  }
}

Hyperparams resolve_hyperparams(const ExperimentConfig& config, EnsembleKind kind) {
  const auto it = config.hyperparams.find(kind);
  const Hyperparams hp = it == config.hyperparams.end() ? default_hyperparams(kind) : it->second;
  if (hp.n_estimators == 0) {
    throw ConfigInvalid("n_estimators must be positive for " + cli_token(kind));
  }
  if (kind == EnsembleKind::EasyEnsemble && hp.boost_rounds == 0) {
    throw ConfigInvalid("boost_rounds must be positive for easy");
  }
  return hp;
}

std::vector<FoldData> prepare_folds(const ExperimentConfig& config, const Dataset& ds,
                                    const FoldPlan& plan) {
  std::vector<FoldData> folds(config.folds);
  const std::uint64_t impute_base = child_seed(config.seed, kStreamImpute);
  if (config.paper_mode) {
    // Whole-dataset preprocessing: one plan and one encoding layout shared
    // by every fold, so test cells leak into the fill statistics.
    const ImputationPlan global = fit_preprocessor(ds, config.missingness_threshold, impute_base);
    const Dataset imputed = apply_imputation(ds, global);
    const EncodingSchema schema = encoding_schema(imputed);
    for (std::size_t k = 0; k < config.folds; ++k) {
      folds[k].train = encode_with(schema, imputed.subset(plan.train_rows(k)));
      folds[k].test = encode_with(schema, imputed.subset(plan.test_rows(k)));
      folds[k].retained = global.retained;
    }
    return folds;
  }
  for (std::size_t k = 0; k < config.folds; ++k) {
    const Dataset train_ds = ds.subset(plan.train_rows(k));
    const ImputationPlan fold_plan =
        fit_preprocessor(train_ds, config.missingness_threshold, child_seed(impute_base, k));
    const Dataset train_imp = apply_imputation(train_ds, fold_plan);
    const EncodingSchema schema = encoding_schema(train_imp);
    folds[k].train = encode_with(schema, train_imp);
    folds[k].test =
        encode_with(schema, apply_imputation(ds.subset(plan.test_rows(k)), fold_plan));
    folds[k].retained = fold_plan.retained;
  }
  return folds;
}

MetricsRecord mean_metrics(const std::vector<FoldResult>& folds) {
  MetricsRecord mean;
  for (const FoldResult& fr : folds) {
    mean.accuracy += fr.metrics.accuracy;
    mean.balanced_accuracy += fr.metrics.balanced_accuracy;
    mean.recall += fr.metrics.recall;
    mean.specificity += fr.metrics.specificity;
    mean.precision_macro += fr.metrics.precision_macro;
    mean.f1_macro += fr.metrics.f1_macro;
    mean.precision_positive += fr.metrics.precision_positive;
    mean.f1_positive += fr.metrics.f1_positive;
    mean.degenerate = mean.degenerate || fr.metrics.degenerate;
  }
  const double n = static_cast<double>(folds.size());
  mean.accuracy /= n;
  mean.balanced_accuracy /= n;
  mean.recall /= n;
  mean.specificity /= n;
  mean.precision_macro /= n;
  mean.f1_macro /= n;
  mean.precision_positive /= n;
  mean.f1_positive /= n;
  return mean;
}

std::vector<RankedFeature> ranked_features(const std::vector<std::string>& names,
                                           const std::vector<double>& scores) {
  if (names.size() != scores.size()) {
    throw LengthMismatch("feature name and importance counts differ");
  }
  std::vector<RankedFeature> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({names[i], scores[i]});
  std::sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
  return out;
}

}  // namespace

FoldPlan experiment_folds(const ExperimentConfig& config, std::span<const int> labels) {
  Rng fold_rng(child_seed(config.seed, kStreamFolds));
  return stratified_kfold(labels, config.folds, fold_rng);
}

EvalReport run_experiment(const ExperimentConfig& config, const Dataset& ds, int threads) {
  validate_config(config);
  if (threads <= 0) threads = default_thread_count();

  EvalReport report;
  report.config = config;
  report.timestamp = iso_utc_now();
  report.feature_names.reserve(ds.cols());
  for (const FeatureSpec& spec : ds.schema()) report.feature_names.push_back(spec.name);

  const FoldPlan plan = experiment_folds(config, ds.labels());
  const std::vector<FoldData> folds = prepare_folds(config, ds, plan);

  const std::uint64_t fit_base = child_seed(config.seed, kStreamFit);
  for (EnsembleKind kind : config.classifiers) {
    ClassifierReport cr;
    cr.kind = kind;
    const Hyperparams hp = resolve_hyperparams(config, kind);
    const std::uint64_t kind_base = child_seed(fit_base, static_cast<std::uint64_t>(kind));

    std::vector<ConfusionMatrix> cms;
    std::vector<int> pooled_labels;
    std::vector<double> pooled_scores;
    for (std::size_t k = 0; k < config.folds; ++k) {
      const FoldData& fd = folds[k];
      const EnsembleModel model =
          fit_ensemble(kind, fd.train, fd.train.labels, hp, child_seed(kind_base, k), threads);
      if (k == 0) cr.params = model.params;  // effective values, defaults resolved

      FoldResult fr;
      fr.test_labels = fd.test.labels;
      fr.test_scores = predict_scores(model, fd.test, threads);
      std::vector<int> preds(fr.test_scores.size());
      std::transform(fr.test_scores.begin(), fr.test_scores.end(), preds.begin(),
                     [](double s) { return hard_label(s); });
      fr.cm = confusion(fr.test_labels, preds);
      fr.metrics = compute_metrics(fr.cm);
      fr.roc = roc_curve(fr.test_labels, fr.test_scores);
      fr.source_importances =
          map_importances_to_source(model.columns, model.importances, fd.retained, ds.cols());

      cms.push_back(fr.cm);
      pooled_labels.insert(pooled_labels.end(), fr.test_labels.begin(), fr.test_labels.end());
      pooled_scores.insert(pooled_scores.end(), fr.test_scores.begin(), fr.test_scores.end());
      cr.folds.push_back(std::move(fr));
    }

    cr.mean = mean_metrics(cr.folds);
    for (const FoldResult& fr : cr.folds) cr.mean_auc += fr.roc.auc;
    cr.mean_auc /= static_cast<double>(cr.folds.size());
    cr.avg_confusion = average_confusions(cms);
    cr.avg_importances.assign(ds.cols(), 0.0);
    for (const FoldResult& fr : cr.folds) {
      for (std::size_t i = 0; i < fr.source_importances.size(); ++i) {
        cr.avg_importances[i] += fr.source_importances[i];
      }
    }
    for (double& v : cr.avg_importances) v /= static_cast<double>(cr.folds.size());
    cr.pooled_roc = roc_curve(pooled_labels, pooled_scores);
    report.classifiers.push_back(std::move(cr));
  }
  return report;
}

std::vector<double> map_importances_to_source(std::span<const EncodedColumn> columns,
                                              std::span<const double> encoded_importances,
                                              std::span<const std::size_t> retained,
                                              std::size_t source_count) {
  if (columns.size() != encoded_importances.size()) {
    throw LengthMismatch("column and importance counts differ");
  }
  std::vector<double> out(source_count, 0.0);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const std::size_t planned = columns[j].origin.index;
    if (planned >= retained.size()) {
      throw IndexOutOfRange("encoded column origin outside the retained schema");
    }
    const std::size_t source = retained[planned];
    if (source >= source_count) {
      throw IndexOutOfRange("retained feature index outside the source schema");
    }
    out[source] += encoded_importances[j];
  }
  return out;
}

std::vector<RankedFeature> rank_importances(const EvalReport& report, std::size_t top_k,
                                            EnsembleKind kind) {
  const ClassifierReport* match = nullptr;
  for (const ClassifierReport& cr : report.classifiers) {
    if (cr.kind == kind) match = &cr;
  }
  if (match == nullptr || match->avg_importances.empty()) {
    throw EmptyReport("no results for classifier '" + cli_token(kind) + "'");
  }
  std::vector<RankedFeature> ranked = ranked_features(report.feature_names, match->avg_importances);
  if (top_k != 0 && top_k < ranked.size()) ranked.resize(top_k);
  return ranked;
}

namespace {

using nlohmann::ordered_json;

ordered_json metrics_to_json(const MetricsRecord& m) {
  return ordered_json{
      {"accuracy", m.accuracy},
      {"balanced_accuracy", m.balanced_accuracy},
      {"recall", m.recall},
      {"specificity", m.specificity},
      {"precision_macro", m.precision_macro},
      {"f1_macro", m.f1_macro},
      {"precision_positive", m.precision_positive},
      {"f1_positive", m.f1_positive},
      {"degenerate", m.degenerate},
  };
}

ordered_json hyperparams_to_json(const Hyperparams& hp) {
  return ordered_json{
      {"n_estimators", hp.n_estimators},
      {"boost_rounds", hp.boost_rounds},
      {"tree",
       {
           {"max_depth", hp.tree.max_depth},
           {"min_split", hp.tree.min_split},
           {"min_leaf", hp.tree.min_leaf},
           {"features_per_split", hp.tree.features_per_split},
       }},
  };
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::vector<std::string>> roc_records(const RocCurve& roc) {
  std::vector<std::vector<std::string>> records;
  records.reserve(roc.points.size());
  for (const RocPoint& p : roc.points) {
    records.push_back({format_double(p.threshold), format_double(p.fpr), format_double(p.tpr)});
  }
  return records;
}

}  // namespace

void write_report(const EvalReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());

  // metrics.json: per-classifier fold and mean metrics. No timestamp, so
  // reruns with the same config are byte-identical.
  ordered_json metrics;
  metrics["folds"] = report.config.folds;
  metrics["seed"] = report.config.seed;
  metrics["paper_mode"] = report.config.paper_mode;
  metrics["missingness_threshold"] = report.config.missingness_threshold;
  metrics["classifiers"] = ordered_json::array();
  for (const ClassifierReport& cr : report.classifiers) {
    ordered_json entry;
    entry["name"] = dir_label(cr.kind);
    entry["label"] = display_label(cr.kind);
    entry["mean"] = metrics_to_json(cr.mean);
    entry["mean_auc"] = cr.mean_auc;
    entry["pooled_auc"] = cr.pooled_roc.auc;
    ordered_json fold_auc = ordered_json::array();
    ordered_json fold_metrics = ordered_json::array();
    for (const FoldResult& fr : cr.folds) {
      fold_auc.push_back(fr.roc.auc);
      fold_metrics.push_back(metrics_to_json(fr.metrics));
    }
    entry["fold_auc"] = std::move(fold_auc);
    entry["folds"] = std::move(fold_metrics);
    metrics["classifiers"].push_back(std::move(entry));
  }
  write_text(root / "metrics.json", metrics.dump(2) + "\n");

  // importance.csv: one block per classifier, features sorted by averaged
  // importance (ties by name) so the top rows are the ranking.
  {
    std::vector<std::vector<std::string>> records;
    for (const ClassifierReport& cr : report.classifiers) {
      for (const RankedFeature& rf : ranked_features(report.feature_names, cr.avg_importances)) {
        records.push_back({dir_label(cr.kind), rf.name, format_double(rf.score)});
      }
    }
    write_csv_file((root / "importance.csv").string(), {"classifier", "feature", "score"},
                   records);
  }

  // confusion_avg.csv: row-normalized rates averaged over folds, one pair of
  // rows (actual negative, actual positive) per classifier.
  {
    std::vector<std::vector<std::string>> records;
    for (const ClassifierReport& cr : report.classifiers) {
      const ConfusionRates& rates = cr.avg_confusion;
      records.push_back({dir_label(cr.kind), "negative", format_double(rates[0][0]),
                         format_double(rates[0][1])});
      records.push_back({dir_label(cr.kind), "positive", format_double(rates[1][0]),
                         format_double(rates[1][1])});
    }
    write_csv_file((root / "confusion_avg.csv").string(),
                   {"classifier", "actual", "predicted_negative", "predicted_positive"}, records);
  }

  // Per-classifier ROC curves, one file per fold plus the pooled curve.
  for (const ClassifierReport& cr : report.classifiers) {
    const fs::path sub = root / dir_label(cr.kind);
    fs::create_directories(sub, ec);
    if (ec) throw IoError("cannot create " + sub.string() + ": " + ec.message());
    for (std::size_t k = 0; k < cr.folds.size(); ++k) {
      write_csv_file((sub / ("roc_fold" + std::to_string(k) + ".csv")).string(),
                     {"threshold", "fpr", "tpr"}, roc_records(cr.folds[k].roc));
    }
    write_csv_file((sub / "roc_pooled.csv").string(), {"threshold", "fpr", "tpr"},
                   roc_records(cr.pooled_roc));
  }

  // config_echo.json: the resolved configuration as it actually ran. The
  // only emitted file carrying the wall-clock timestamp.
  ordered_json echo;
  echo["generated_at"] = report.timestamp;
  echo["dataset_source"] = report.config.dataset_source;
  echo["seed"] = report.config.seed;
  echo["folds"] = report.config.folds;
  echo["paper_mode"] = report.config.paper_mode;
  echo["missingness_threshold"] = report.config.missingness_threshold;
  ordered_json tokens = ordered_json::array();
  for (EnsembleKind kind : report.config.classifiers) tokens.push_back(cli_token(kind));
  echo["classifiers"] = std::move(tokens);
  ordered_json hp;
  for (const ClassifierReport& cr : report.classifiers) {
    hp[dir_label(cr.kind)] = hyperparams_to_json(cr.params);
  }
  echo["hyperparams"] = std::move(hp);
  write_text(root / "config_echo.json", echo.dump(2) + "\n");
}

}  // namespace balens
