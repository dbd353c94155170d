// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Each check carries its tolerance next to the assertion so the
// bar is visible where it is enforced.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "balens/cli.hpp"
#include "balens/dataset.hpp"
#include "balens/ensemble.hpp"
#include "balens/eval.hpp"
#include "balens/metrics.hpp"
#include "balens/preprocess.hpp"
#include "balens/rng.hpp"
#include "balens/sampling.hpp"
#include "balens/synthetic.hpp"
#include "balens/tree.hpp"

using namespace balens;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kTolExact = 1e-12;   // closed-form identities
constexpr double kTolPairs = 1e-9;    // trapezoid vs pair-count AUC
constexpr double kTolBoost = 1e-9;    // post-round reweighting identity

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

EncodedMatrix make_matrix(const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels) {
  EncodedMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < m.cols; ++c) {
    const std::string name = "x" + std::to_string(c);
    m.columns.push_back({{name, FeatureKind::Numeric, c}, "", name});
  }
  for (const auto& row : rows) m.values.insert(m.values.end(), row.begin(), row.end());
  m.labels = labels;
  return m;
}

EncodedMatrix random_matrix(std::size_t n, std::size_t p, Rng& rng, std::vector<int>& labels) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(p));
  labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) rows[r][c] = rng.unit();
    labels[r] = static_cast<int>(rng.below(2));
  }
  // both classes must be present
  if (std::count(labels.begin(), labels.end(), 1) == 0) labels[0] = 1;
  if (std::count(labels.begin(), labels.end(), 0) == 0) labels[0] = 0;
  return make_matrix(rows, labels);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

SynthSpec benchmark_spec(double separation, std::uint64_t seed) {
  SynthSpec spec;
  spec.n = 2000;
  spec.p_numeric = 20;  // 10 informative, 10 noise
  spec.p_categorical = 2;
  spec.positive_rate = 0.05;
  spec.class_separation = separation;
  spec.missing_rate = 0.1;
  spec.seed = seed;
  return spec;
}

// ---- criteria ---------------------------------------------------------------

bool c1_hand_metrics(std::string& detail) {
  const auto start = Clock::now();
  ConfusionMatrix cm;
  cm.tp = 3;
  cm.fn = 2;
  cm.fp = 1;
  cm.tn = 4;
  const MetricsRecord m = compute_metrics(cm);
  bool ok = near(m.recall, 0.6, kTolExact) && near(m.specificity, 0.8, kTolExact) &&
            near(m.balanced_accuracy, 0.7, kTolExact) && near(m.accuracy, 0.7, kTolExact) &&
            near(m.precision_positive, 0.75, kTolExact);
  const double secs = seconds_since(start);
  ok = ok && secs < 1.0;
  std::ostringstream os;
  os << "hand-checked confusion in " << secs << "s";
  detail = os.str();
  return ok;
}

bool c2_auc_cross_check(std::string& detail) {
  const auto start = Clock::now();
  Rng rng(42);
  double worst = 0.0;
  for (int instance = 0; instance < 220; ++instance) {
    const std::size_t n = 2 + rng.below(999);
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.below(2));
      // every other instance uses a 5-level grid so tied scores are common
      scores[i] = (instance % 2 == 0) ? rng.unit() : 0.25 * static_cast<double>(rng.below(5));
    }
    if (std::count(labels.begin(), labels.end(), 1) == 0) labels[0] = 1;
    if (std::count(labels.begin(), labels.end(), 0) == 0) labels[0] = 0;
    const double trapezoid = roc_curve(labels, scores).auc;
    const double pairs = auc_oracle(labels, scores);
    worst = std::max(worst, std::fabs(trapezoid - pairs));
  }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << "220 instances, max |trapezoid - pairs| = " << worst << " in " << secs << "s";
  detail = os.str();
  return worst <= kTolPairs && secs < 30.0;
}

bool c3_balanced_accuracy_identity(std::string& detail) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    ConfusionMatrix cm;
    cm.tp = static_cast<double>(rng.below(100));
    cm.fp = static_cast<double>(rng.below(100));
    cm.fn = static_cast<double>(rng.below(100));
    cm.tn = static_cast<double>(rng.below(100));
    if (cm.total() == 0.0) cm.tp = 1;
    const MetricsRecord m = compute_metrics(cm);
    if (m.balanced_accuracy != (m.recall + m.specificity) / 2.0) {
      detail = "literal identity broken";
      return false;
    }
  }
  // on a balanced set plain accuracy coincides with balanced accuracy
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double size = static_cast<double>(1 + rng.below(500));
    ConfusionMatrix cm;
    cm.tp = static_cast<double>(rng.below(static_cast<std::uint64_t>(size) + 1));
    cm.tn = static_cast<double>(rng.below(static_cast<std::uint64_t>(size) + 1));
    cm.fn = size - cm.tp;
    cm.fp = size - cm.tn;
    const MetricsRecord m = compute_metrics(cm);
    worst = std::max(worst, std::fabs(m.accuracy - m.balanced_accuracy));
  }
  std::ostringstream os;
  os << "2000 matrices, balanced-set max |acc - balacc| = " << worst;
  detail = os.str();
  return worst <= kTolExact;
}

bool c4_samplers_balance(std::string& detail) {
  const std::size_t n = 67, positives = 13;
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < positives; ++i) labels[i] = 1;

  auto balanced = [&](const std::vector<std::size_t>& indices) {
    std::ptrdiff_t pos = 0, neg = 0;
    for (std::size_t idx : indices) (labels[idx] == 1 ? pos : neg) += 1;
    return pos == neg && pos > 0;
  };

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    if (!balanced(random_undersample(labels, rng).indices)) {
      detail = "random_undersample unbalanced at seed " + std::to_string(seed);
      return false;
    }
    std::vector<double> weights(n);
    for (double& w : weights) w = 0.05 + rng.unit();
    if (!balanced(balanced_resample(labels, weights, rng))) {
      detail = "balanced_resample unbalanced at seed " + std::to_string(seed);
      return false;
    }
  }

  // member subsamples inside the fitted ensembles
  Rng data_rng(5);
  std::vector<int> y;
  const EncodedMatrix X = random_matrix(30, 2, data_rng, y);
  for (std::size_t i = 0; i < 9; ++i) y[i] = 1;
  for (std::size_t i = 9; i < y.size(); ++i) y[i] = 0;
  EncodedMatrix Xy = X;
  Xy.labels = y;

  Hyperparams small;
  small.n_estimators = 2;
  Hyperparams boost;
  boost.n_estimators = 3;
  boost.tree.max_depth = 1;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EnsembleModel forest = fit_balanced_random_forest(Xy, y, small, seed);
    const EnsembleModel bagging = fit_balanced_bagging(Xy, y, small, seed);
    const EnsembleModel rusboost = fit_rusboost(Xy, y, boost, seed);
    for (const EnsembleModel* model : {&forest, &bagging, &rusboost}) {
      for (const EnsembleMember& member : model->members) {
        if (member.train_pos != member.train_neg || member.train_pos == 0) {
          detail = "member subsample unbalanced at seed " + std::to_string(seed);
          return false;
        }
      }
    }
  }
  detail = "100 seeds x {undersample, resample, forest, bagging, rusboost}";
  return true;
}

bool c5_stratification(std::string& detail) {
  Rng rng(11);
  for (int instance = 0; instance < 500; ++instance) {
    const std::size_t folds = 2 + rng.below(7);
    const std::size_t pos = folds + rng.below(40);
    const std::size_t neg = folds + rng.below(40);
    std::vector<int> labels(pos + neg, 0);
    for (std::size_t i = 0; i < pos; ++i) labels[i] = 1;
    rng.shuffle(std::span<int>(labels));

    const FoldPlan plan = stratified_kfold(labels, folds, rng);
    if (plan.assignment.size() != labels.size()) {
      detail = "assignment size mismatch";
      return false;
    }
    for (int cls : {0, 1}) {
      std::vector<std::size_t> counts(folds, 0);
      for (std::size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] == cls) counts[plan.assignment[r]] += 1;
      }
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      if (*hi - *lo > 1) {
        detail = "per-class fold counts differ by more than one";
        return false;
      }
    }
    std::vector<int> seen(labels.size(), 0);
    for (std::size_t f = 0; f < folds; ++f) {
      for (std::size_t r : plan.test_rows(f)) seen[r] += 1;
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(seen.size())) {
      detail = "folds do not partition the rows";
      return false;
    }
  }
  detail = "500 instances, folds 2..8";
  return true;
}

// Weighted Gini impurity of a node holding `rows`, uniform weights.
double node_impurity(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  double pos = 0;
  for (std::size_t r : rows) pos += (y[r] == 1) ? 1.0 : 0.0;
  const double total = static_cast<double>(rows.size());
  if (total == 0) return 0.0;
  const double p = pos / total;
  return total * (1.0 - p * p - (1.0 - p) * (1.0 - p));
}

bool gini_strictly_decreases(const EncodedMatrix& X, const std::vector<int>& y,
                             const TreeNode* node, const std::vector<std::size_t>& rows) {
  if (node->is_leaf()) return true;
  std::vector<std::size_t> left, right;
  for (std::size_t r : rows) {
    if (X.at(r, static_cast<std::size_t>(node->feature)) < node->threshold) {
      left.push_back(r);
    } else {
      right.push_back(r);
    }
  }
  if (left.empty() || right.empty()) return false;
  const double parent = node_impurity(y, rows);
  const double children = node_impurity(y, left) + node_impurity(y, right);
  if (!(children < parent)) return false;
  return gini_strictly_decreases(X, y, node->left.get(), left) &&
         gini_strictly_decreases(X, y, node->right.get(), right);
}

bool c6_tree_memorizes(std::string& detail) {
  Rng rng(19);
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 20 + rng.below(181);
    const std::size_t p = 1 + rng.below(10);
    std::vector<int> y;
    const EncodedMatrix X = random_matrix(n, p, rng, y);

    Rng fit_rng(static_cast<std::uint64_t>(instance) + 1000);
    const TreeModel tree = fit_tree(X, y, TreeParams{}, fit_rng);
    for (std::size_t r = 0; r < n; ++r) {
      if (hard_label(predict_tree(tree, X.row(r))) != y[r]) {
        detail = "training row misclassified at instance " + std::to_string(instance);
        return false;
      }
    }
    std::vector<std::size_t> all(n);
    for (std::size_t r = 0; r < n; ++r) all[r] = r;
    if (!gini_strictly_decreases(X, y, tree.root.get(), all)) {
      detail = "a split failed to strictly decrease weighted Gini";
      return false;
    }
  }

  const EncodedMatrix xorm =
      make_matrix({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
  Rng xr(3);
  TreeParams xp;
  xp.max_depth = 2;
  const TreeModel xor_tree = fit_tree(xorm, xorm.labels, xp, xr);
  for (std::size_t r = 0; r < 4; ++r) {
    if (hard_label(predict_tree(xor_tree, xorm.row(r))) != xorm.labels[r]) {
      detail = "XOR not fit at depth 2";
      return false;
    }
  }
  detail = "100 consistent datasets memorized; XOR exact at depth 2";
  return xor_tree.depth() == 2;
}

bool c7_boost_reweighting(std::string& detail) {
  Rng rng(23);
  int interior_rounds = 0;
  double worst = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t n = 20 + rng.below(41);
    const std::size_t p = 1 + rng.below(3);
    std::vector<int> y;
    const EncodedMatrix X = random_matrix(n, p, rng, y);
    const std::vector<double> w0(n, 1.0 / static_cast<double>(n));

    const auto members =
        fit_adaboost(X, y, w0, 4, static_cast<std::uint64_t>(instance), false);
    std::vector<double> w = w0;
    for (const EnsembleMember& member : members) {
      if (member.alpha <= 0.0 || member.alpha >= 10.0) break;  // fallback or cap
      std::vector<int> h(n);
      for (std::size_t r = 0; r < n; ++r) h[r] = hard_label(predict_tree(member.tree, X.row(r)));
      double total = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double agree = (h[r] == y[r]) ? 1.0 : -1.0;
        w[r] *= std::exp(-member.alpha * agree);
        total += w[r];
      }
      double err = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        w[r] /= total;
        if (h[r] != y[r]) err += w[r];
      }
      worst = std::max(worst, std::fabs(err - 0.5));
      interior_rounds += 1;
    }
  }
  if (interior_rounds < 50) {
    detail = "too few interior boosting rounds: " + std::to_string(interior_rounds);
    return false;
  }

  // quarter-error stump: alpha must be ln(3)/2
  const EncodedMatrix quarter = make_matrix({{1}, {2}, {3}, {4}}, {1, 0, 1, 1});
  const std::vector<double> wq(4, 0.25);
  const auto one = fit_adaboost(quarter, quarter.labels, wq, 1, 0, false);
  const bool alpha_ok =
      one.size() == 1 && near(one[0].alpha, 0.5 * std::log(3.0), kTolExact);
  std::ostringstream os;
  os << interior_rounds << " rounds, max |post-round error - 0.5| = " << worst;
  detail = os.str();
  return worst <= kTolBoost && alpha_ok;
}

bool c8_forest_is_mean_of_trees(std::string& detail) {
  Rng rng(29);
  std::vector<int> y;
  const EncodedMatrix X = random_matrix(60, 3, rng, y);

  Hyperparams single;
  single.n_estimators = 1;
  const EnsembleModel one = fit_balanced_random_forest(X, y, single, 5);
  if (one.members.size() != 1) {
    detail = "single-tree forest has wrong member count";
    return false;
  }
  for (std::size_t r = 0; r < X.rows; ++r) {
    if (predict_score(one, X.row(r)) != predict_tree(one.members[0].tree, X.row(r))) {
      detail = "single-tree forest diverges from its member";
      return false;
    }
  }

  Hyperparams seven;
  seven.n_estimators = 7;
  const EnsembleModel forest = fit_balanced_random_forest(X, y, seven, 5);
  double worst = 0.0;
  for (std::size_t r = 0; r < X.rows; ++r) {
    double mean = 0.0;
    for (const EnsembleMember& member : forest.members) {
      mean += predict_tree(member.tree, X.row(r));
    }
    mean /= static_cast<double>(forest.members.size());
    worst = std::max(worst, std::fabs(predict_score(forest, X.row(r)) - mean));
  }
  std::ostringstream os;
  os << "60 probes, max |forest - member mean| = " << worst;
  detail = os.str();
  return worst <= kTolExact;
}

bool c9_benchmark_separates(std::string& detail, std::optional<EvalReport>& benchmark) {
  const auto start = Clock::now();
  const Dataset ds = generate_synthetic(benchmark_spec(2.0, 7));
  ExperimentConfig config;
  config.seed = 7;
  EvalReport report = run_experiment(config, ds, 0);
  const double secs = seconds_since(start);

  bool ok = secs < 120.0;
  std::ostringstream os;
  for (const ClassifierReport& cr : report.classifiers) {
    ok = ok && cr.mean.balanced_accuracy >= 0.75;
    if (cr.kind == EnsembleKind::BalancedRandomForest) {
      ok = ok && cr.mean.balanced_accuracy >= 0.85 && cr.mean_auc >= 0.90;
      os << "forest balacc " << cr.mean.balanced_accuracy << ", auc " << cr.mean_auc;
    }
  }
  os << ", " << secs << "s";
  detail = os.str();
  benchmark = std::move(report);
  return ok;
}

bool c10_null_separation_is_chance(std::string& detail) {
  const Dataset ds = generate_synthetic(benchmark_spec(0.0, 1));
  ExperimentConfig config;
  config.seed = 1;
  const EvalReport report = run_experiment(config, ds, 0);
  std::ostringstream os;
  bool ok = true;
  for (const ClassifierReport& cr : report.classifiers) {
    ok = ok && cr.mean_auc >= 0.45 && cr.mean_auc <= 0.55;
    os << display_label(cr.kind) << " " << cr.mean_auc << " ";
  }
  detail = os.str();
  return ok;
}

bool c11_informative_features_rank(std::string& detail,
                                   const std::optional<EvalReport>& benchmark) {
  if (!benchmark) {
    detail = "no benchmark report available";
    return false;
  }
  const auto top = rank_importances(*benchmark, 10, EnsembleKind::BalancedRandomForest);
  int informative = 0;
  for (const RankedFeature& f : top) {
    if (f.name.rfind("num_i", 0) == 0) informative += 1;
  }
  detail = std::to_string(informative) + " of 10 top-ranked features are informative";
  return informative >= 8;
}

bool c12_c14_shared(std::string& c12_detail, bool& c12_ok, std::string& c14_detail,
                    bool& c14_ok) {
  const fs::path base = fs::temp_directory_path() / "balens_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path csv = base / "cohort.csv";
  write_csv(generate_synthetic(benchmark_spec(2.0, 7)), csv.string(), "dropout");

  auto evaluate = [&](const fs::path& out, const std::string& threads, std::string& stdout_text) {
    std::ostringstream os, err;
    const int rc = run_cli({"evaluate", "--input", csv.string(), "--categorical-columns",
                            "cat0,cat1", "--seed", "7", "--threads", threads, "--out",
                            out.string()},
                           os, err);
    stdout_text = os.str();
    return rc;
  };

  std::string out_a, out_b;
  const int rc_a = evaluate(base / "a", "1", out_a);
  const int rc_b = evaluate(base / "b", "4", out_b);
  c12_ok = rc_a == 0 && rc_b == 0 &&
           slurp(base / "a" / "metrics.json") == slurp(base / "b" / "metrics.json") &&
           slurp(base / "a" / "importance.csv") == slurp(base / "b" / "importance.csv") &&
           !slurp(base / "a" / "metrics.json").empty();
  c12_detail = "1-thread and 4-thread runs byte-compared";

  // table shape: exactly these columns, one row per classifier
  c14_ok = false;
  c14_detail = "table header or rows malformed";
  std::istringstream lines(out_a);
  std::string line, header;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) {
    if (line.rfind("Classifier", 0) == 0) {
      header = line;
      while (std::getline(lines, line) && !line.empty()) rows.push_back(line);
      break;
    }
  }
  const std::vector<std::string> columns = {"Classifier", "Accuracy", "Balanced Accuracy",
                                            "Recall",     "Precision", "F1-Score"};
  std::string leftover = header;
  std::size_t cursor = 0;
  bool ordered = true;
  for (const std::string& name : columns) {
    const std::size_t at = leftover.find(name, cursor);
    if (at == std::string::npos) {
      ordered = false;
      break;
    }
    leftover.replace(at, name.size(), std::string(name.size(), ' '));
    cursor = at + name.size();
  }
  const bool nothing_else =
      ordered && leftover.find_first_not_of(' ') == std::string::npos;

  const std::vector<std::string> labels = {"E-Ensemble", "B-Boosting", "B-Bagging",
                                           "B-RandomForest"};
  bool rows_ok = rows.size() == labels.size();
  for (std::size_t i = 0; rows_ok && i < labels.size(); ++i) {
    std::istringstream cells(rows[i]);
    std::string label;
    cells >> label;
    rows_ok = label == labels[i];
    for (int field = 0; rows_ok && field < 5; ++field) {
      double value = -1.0;
      cells >> value;
      rows_ok = cells.good() || cells.eof();
      rows_ok = rows_ok && value >= 0.0 && value <= 1.0;
    }
    std::string extra;
    if (cells >> extra) rows_ok = false;
  }
  c14_ok = nothing_else && rows_ok;
  if (c14_ok) c14_detail = "header and four classifier rows match";

  fs::remove_all(base);
  return true;
}

bool c13_threshold_and_leakage(std::string& detail) {
  // exactly 30% missing survives; one more missing cell kills the feature
  auto boundary_ds = [](std::size_t extra_missing) {
    std::vector<FeatureSpec> schema = {{"f_keep", FeatureKind::Numeric, 0},
                                       {"f_drop", FeatureKind::Numeric, 1}};
    std::vector<int> labels(10);
    for (std::size_t i = 0; i < 10; ++i) labels[i] = i % 2 == 0 ? 1 : 0;
    Dataset ds(std::move(schema), std::move(labels));
    for (std::size_t r = 0; r < 10; ++r) {
      if (r >= 3 + extra_missing) ds.set_numeric(r, 0, static_cast<double>(r));
      if (r >= 4) ds.set_numeric(r, 1, static_cast<double>(r));
    }
    return ds;
  };
  const ImputationPlan at_boundary = fit_preprocessor(boundary_ds(0), 0.30, 1);
  const ImputationPlan over_boundary = fit_preprocessor(boundary_ds(1), 0.30, 1);
  const bool boundary_ok = at_boundary.dropped == std::vector<std::size_t>{1} &&
                           over_boundary.dropped == std::vector<std::size_t>{0, 1};
  if (!boundary_ok) {
    detail = "30% boundary misclassified";
    return false;
  }

  // Poison the separating feature with missing cells placed so that the whole
  // dataset sits above the drop threshold while fold 0's training split sits
  // exactly at it. A fold plan that read test rows would drop the feature and
  // its importance would collapse to zero.
  std::vector<int> labels(24);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 2 == 0 ? 1 : 0;

  ExperimentConfig config;
  config.classifiers = {EnsembleKind::BalancedRandomForest};
  config.folds = 6;
  config.seed = 9;
  Hyperparams hp;
  hp.n_estimators = 8;
  config.hyperparams[EnsembleKind::BalancedRandomForest] = hp;

  const FoldPlan plan = experiment_folds(config, labels);
  const std::vector<std::size_t> test0 = plan.test_rows(0);
  const std::vector<std::size_t> train0 = plan.train_rows(0);

  std::vector<FeatureSpec> schema = {{"sep", FeatureKind::Numeric, 0},
                                     {"noise", FeatureKind::Numeric, 1}};
  Dataset ds(std::move(schema), labels);
  std::vector<std::uint8_t> blank(24, 0);
  for (std::size_t r : test0) blank[r] = 1;
  for (std::size_t i = 0; i < 6; ++i) blank[train0[i]] = 1;  // 6 of 20 = 30% exactly
  Rng noise_rng(77);
  for (std::size_t r = 0; r < 24; ++r) {
    if (!blank[r]) {
      ds.set_numeric(r, 0, (labels[r] == 1 ? 5.0 : 0.0) + 0.01 * static_cast<double>(r));
    }
    ds.set_numeric(r, 1, noise_rng.unit());
  }

  // seen whole, the feature is over the threshold and would be dropped
  if (missing_fraction(ds, 0) <= 0.30 ||
      fit_preprocessor(ds, 0.30, 1).dropped != std::vector<std::size_t>{0}) {
    detail = "poison construction broken";
    return false;
  }

  const EvalReport honest = run_experiment(config, ds);
  const double kept_importance = honest.classifiers[0].folds[0].source_importances[0];

  config.paper_mode = true;  // whole-dataset preprocessing drops the separator
  const EvalReport leaky = run_experiment(config, ds);
  const double leaky_importance = leaky.classifiers[0].folds[0].source_importances[0];

  std::ostringstream os;
  os << "fold-0 separator importance " << kept_importance << " honest, " << leaky_importance
     << " with whole-dataset preprocessing";
  detail = os.str();
  return kept_importance > 0.5 && leaky_importance == 0.0;
}

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::string&)> check;
};

}  // namespace

int main() {
  int failures = 0;
  std::optional<EvalReport> benchmark;
  std::string c12_detail, c14_detail;
  bool c12_ok = false, c14_ok = false;
  bool cli_pair_ran = false;

  auto run_cli_pair = [&]() {
    if (!cli_pair_ran) {
      c12_c14_shared(c12_detail, c12_ok, c14_detail, c14_ok);
      cli_pair_ran = true;
    }
  };

  const std::vector<Criterion> criteria = {
      {1, "hand-checked confusion metrics", c1_hand_metrics},
      {2, "trapezoid AUC equals pair counting", c2_auc_cross_check},
      {3, "balanced accuracy identities", c3_balanced_accuracy_identity},
      {4, "every sampler balances the classes", c4_samplers_balance},
      {5, "stratified folds are even partitions", c5_stratification},
      {6, "trees memorize consistent data", c6_tree_memorizes},
      {7, "boosting reweights rounds to one half", c7_boost_reweighting},
      {8, "a forest is the mean of its trees", c8_forest_is_mean_of_trees},
      {9, "benchmark cohort is separated",
       [&](std::string& d) { return c9_benchmark_separates(d, benchmark); }},
      {10, "zero separation scores at chance", c10_null_separation_is_chance},
      {11, "informative features dominate the ranking",
       [&](std::string& d) { return c11_informative_features_rank(d, benchmark); }},
      {12, "evaluate output is thread-count invariant",
       [&](std::string& d) {
         run_cli_pair();
         d = c12_detail;
         return c12_ok;
       }},
      {13, "missingness boundary and leak-free fold plans", c13_threshold_and_leakage},
      {14, "summary table has the agreed columns",
       [&](std::string& d) {
         run_cli_pair();
         d = c14_detail;
         return c14_ok;
       }},
  };

  for (const Criterion& criterion : criteria) {
    bool ok = false;
    std::string detail;
    try {
      ok = criterion.check(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) failures += 1;
    std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.label.c_str(), detail.empty() ? "-" : detail.c_str());
  }
  if (failures > 0) std::printf("%d criteria failed\n", failures);
  return failures;
}
