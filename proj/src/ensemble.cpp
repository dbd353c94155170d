#include "balens/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "balens/errors.hpp"
#include "balens/parallel.hpp"
#include "balens/sampling.hpp"

namespace balens {

namespace {

void validate_fit_inputs(const EncodedMatrix& X, std::span<const int> y) {
  if (X.rows == 0) throw EmptyInput("ensemble fit: no rows");
  if (X.rows != y.size()) throw LengthMismatch("ensemble fit: matrix rows and labels differ");
  if (X.rows < 2) throw InvalidArgument("ensemble fit: at least two rows required");
  bool has_pos = false;
  bool has_neg = false;
  for (const int label : y) {
    (label ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw SingleClassDataset("ensemble fit: both classes required");
}

void count_classes(std::span<const int> y, std::size_t& pos, std::size_t& neg) {
  pos = 0;
  neg = 0;
  for (const int label : y) {
    ++(label ? pos : neg);
  }
}

std::vector<int> gather_labels(std::span<const int> y, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const std::size_t r : rows) out.push_back(y[r]);
  return out;
}

// Shared fit path of the forest and bagging kinds: per member, bootstrap the
// full set, under-sample the bootstrap to balance, fit one tree.
EnsembleModel fit_resampled_forest(EnsembleKind kind, const EncodedMatrix& X,
                                   std::span<const int> y, const Hyperparams& params,
                                   std::uint64_t seed, int threads) {
  validate_fit_inputs(X, y);
  if (params.n_estimators < 1) throw InvalidArgument("ensemble fit: n_estimators must be >= 1");

  Hyperparams effective = params;
  if (kind == EnsembleKind::BalancedRandomForest && effective.tree.features_per_split == 0) {
    effective.tree.features_per_split =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.cols))));
  }

  EnsembleModel model;
  model.kind = kind;
  model.params = effective;
  model.seed = seed;
  model.columns = X.columns;
  model.members.resize(params.n_estimators);

  const std::size_t n = X.rows;
  parallel_for(params.n_estimators, threads, [&](std::size_t d) {
    Rng rng(child_seed(seed, d));
    IndexSample boot;
    std::vector<int> boot_labels;
    // A bootstrap can miss a whole class on tiny or extreme data; redraw.
    for (std::size_t attempt = 0;; ++attempt) {
      boot = bootstrap(n, rng);
      boot_labels = gather_labels(y, boot.indices);
      const bool has_pos = std::find(boot_labels.begin(), boot_labels.end(), 1) != boot_labels.end();
      const bool has_neg = std::find(boot_labels.begin(), boot_labels.end(), 0) != boot_labels.end();
      if (has_pos && has_neg) break;
      if (attempt >= 64) {
        throw SingleClassDataset("ensemble fit: bootstrap kept drawing one class");
      }
    }
    const IndexSample under = random_undersample(boot_labels, rng);
    std::vector<std::size_t> rows;
    rows.reserve(under.indices.size());
    for (const std::size_t i : under.indices) rows.push_back(boot.indices[i]);

    const EncodedMatrix sub = gather_rows(X, rows);
    const std::vector<int> y_sub = gather_labels(y, rows);
    EnsembleMember& member = model.members[d];
    member.tree = fit_tree(sub, y_sub, effective.tree, rng);
    member.alpha = 1.0;
    count_classes(y_sub, member.train_pos, member.train_neg);
  });

  model.importances = ensemble_importances(model);
  return model;
}

double chain_margin_score(const EnsembleModel& model, std::size_t begin, std::size_t end,
                          std::span<const double> x) {
  double num = 0.0;
  double denom = 0.0;
  for (std::size_t m = begin; m < end; ++m) {
    const EnsembleMember& member = model.members[m];
    const double vote = hard_label(predict_tree(member.tree, x)) ? 1.0 : -1.0;
    num += member.alpha * vote;
    denom += member.alpha;
  }
  if (denom <= 0.0) return 0.5;
  return (num / denom + 1.0) / 2.0;
}

}  // namespace

std::string kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::BalancedRandomForest:
      return "balanced_random_forest";
    case EnsembleKind::EasyEnsemble:
      return "easy_ensemble";
    case EnsembleKind::RUSBoost:
      return "rusboost";
    case EnsembleKind::BalancedBagging:
      return "balanced_bagging";
  }
  throw InvalidArgument("kind_name: unknown ensemble kind");
}

EnsembleKind kind_from_name(const std::string& name) {
  for (const EnsembleKind kind : kAllKinds) {
    if (kind_name(kind) == name) return kind;
  }
  throw InvalidArgument("kind_from_name: unknown ensemble kind '" + name + "'");
}

Hyperparams default_hyperparams(EnsembleKind kind) {
  Hyperparams params;
  switch (kind) {
    case EnsembleKind::BalancedRandomForest:
      params.n_estimators = 100;
      break;
    case EnsembleKind::BalancedBagging:
      params.n_estimators = 10;
      break;
    case EnsembleKind::RUSBoost:
      params.n_estimators = 50;
      params.tree.max_depth = 1;
      break;
    case EnsembleKind::EasyEnsemble:
      params.n_estimators = 10;
      params.boost_rounds = 10;
      params.tree.max_depth = 1;
      break;
  }
  return params;
}

EnsembleModel fit_balanced_random_forest(const EncodedMatrix& X, std::span<const int> y,
                                         const Hyperparams& params, std::uint64_t seed,
                                         int threads) {
  return fit_resampled_forest(EnsembleKind::BalancedRandomForest, X, y, params, seed, threads);
}

EnsembleModel fit_balanced_bagging(const EncodedMatrix& X, std::span<const int> y,
                                   const Hyperparams& params, std::uint64_t seed, int threads) {
  return fit_resampled_forest(EnsembleKind::BalancedBagging, X, y, params, seed, threads);
}

std::vector<EnsembleMember> fit_adaboost(const EncodedMatrix& X, std::span<const int> y,
                                         std::span<const double> weights_init,
                                         std::size_t rounds, std::uint64_t seed,
                                         bool resample_each_round,
                                         const TreeParams& tree_params) {
  validate_fit_inputs(X, y);
  if (rounds < 1) throw InvalidArgument("fit_adaboost: rounds must be >= 1");

  const std::size_t n = X.rows;
  std::vector<double> w;
  if (weights_init.empty()) {
    w.assign(n, 1.0 / static_cast<double>(n));
  } else {
    if (weights_init.size() != n) throw LengthMismatch("fit_adaboost: weight length");
    double total = 0.0;
    for (const double v : weights_init) {
      if (v < 0.0) throw NegativeWeight("fit_adaboost");
      total += v;
    }
    if (total <= 0.0) throw InvalidArgument("fit_adaboost: zero total weight");
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = weights_init[i] / total;
  }

  Rng rng(seed);
  std::vector<EnsembleMember> members;
  // Fallback stump in case every round gets discarded: a chain must not come
  // out empty, so the last fitted stump is kept with zero stage weight.
  EnsembleMember discarded;
  bool have_discarded = false;

  std::vector<int> h(n);
  for (std::size_t round = 0; round < rounds; ++round) {
    bool stop_chain = false;
    for (int attempt = 0;; ++attempt) {
      EnsembleMember candidate;
      if (resample_each_round) {
        const std::vector<std::size_t> rows = balanced_resample(y, w, rng);
        const EncodedMatrix sub = gather_rows(X, rows);
        const std::vector<int> y_sub = gather_labels(y, rows);
        // Boosting by resampling: the draw already encodes the weights, so
        // the stump itself is fit uniformly.
        candidate.tree = fit_tree(sub, y_sub, tree_params, rng);
        count_classes(y_sub, candidate.train_pos, candidate.train_neg);
      } else {
        candidate.tree = fit_tree(X, y, w, tree_params, rng);
        count_classes(y, candidate.train_pos, candidate.train_neg);
      }

      double eps = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        h[i] = hard_label(predict_tree(candidate.tree, X.row(i)));
        if (h[i] != y[i]) eps += w[i];
      }

      if (eps <= 0.0) {
        candidate.alpha = 10.0;  // formula diverges at zero error; cap and stop
        members.push_back(std::move(candidate));
        stop_chain = true;
        break;
      }
      if (eps >= 0.5) {
        discarded = std::move(candidate);
        have_discarded = true;
        if (resample_each_round && attempt == 0) continue;  // one fresh redraw
        stop_chain = true;
        break;
      }

      // Clamped well past any error reachable in practice; keeps the
      // exp updates finite.
      candidate.alpha = std::min(0.5 * std::log((1.0 - eps) / eps), 30.0);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double margin = (y[i] ? 1.0 : -1.0) * (h[i] ? 1.0 : -1.0);
        w[i] *= std::exp(-candidate.alpha * margin);
        total += w[i];
      }
      for (double& v : w) v /= total;
      members.push_back(std::move(candidate));
      break;
    }
    if (stop_chain) break;
  }

  if (members.empty() && have_discarded) {
    discarded.alpha = 0.0;
    members.push_back(std::move(discarded));
  }
  return members;
}

EnsembleModel fit_rusboost(const EncodedMatrix& X, std::span<const int> y,
                           const Hyperparams& params, std::uint64_t seed) {
  if (params.n_estimators < 1) throw InvalidArgument("fit_rusboost: n_estimators must be >= 1");
  EnsembleModel model;
  model.kind = EnsembleKind::RUSBoost;
  model.params = params;
  model.seed = seed;
  model.columns = X.columns;
  model.members = fit_adaboost(X, y, {}, params.n_estimators, seed, true, params.tree);
  model.importances = ensemble_importances(model);
  return model;
}

EnsembleModel fit_easy_ensemble(const EncodedMatrix& X, std::span<const int> y,
                                const Hyperparams& params, std::uint64_t seed, int threads) {
  validate_fit_inputs(X, y);
  if (params.n_estimators < 1 || params.boost_rounds < 1) {
    throw InvalidArgument("fit_easy_ensemble: subset and round counts must be >= 1");
  }

  std::vector<std::vector<EnsembleMember>> chains(params.n_estimators);
  parallel_for(params.n_estimators, threads, [&](std::size_t s) {
    const std::uint64_t base = child_seed(seed, s);
    Rng sub_rng(child_seed(base, 0));
    const IndexSample under = random_undersample(y, sub_rng);
    const EncodedMatrix sub = gather_rows(X, under.indices);
    const std::vector<int> y_sub = gather_labels(y, under.indices);
    chains[s] =
        fit_adaboost(sub, y_sub, {}, params.boost_rounds, child_seed(base, 1), false, params.tree);
  });

  EnsembleModel model;
  model.kind = EnsembleKind::EasyEnsemble;
  model.params = params;
  model.seed = seed;
  model.columns = X.columns;
  model.subset_sizes.reserve(params.n_estimators);
  for (auto& chain : chains) {
    model.subset_sizes.push_back(chain.size());
    for (auto& member : chain) model.members.push_back(std::move(member));
  }
  model.importances = ensemble_importances(model);
  return model;
}

EnsembleModel fit_ensemble(EnsembleKind kind, const EncodedMatrix& X, std::span<const int> y,
                           const Hyperparams& params, std::uint64_t seed, int threads) {
  switch (kind) {
    case EnsembleKind::BalancedRandomForest:
      return fit_balanced_random_forest(X, y, params, seed, threads);
    case EnsembleKind::BalancedBagging:
      return fit_balanced_bagging(X, y, params, seed, threads);
    case EnsembleKind::RUSBoost:
      return fit_rusboost(X, y, params, seed);
    case EnsembleKind::EasyEnsemble:
      return fit_easy_ensemble(X, y, params, seed, threads);
  }
  throw InvalidArgument("fit_ensemble: unknown ensemble kind");
}

double predict_score(const EnsembleModel& model, std::span<const double> x) {
  if (model.members.empty()) throw EmptyInput("predict_score: ensemble has no members");
  switch (model.kind) {
    case EnsembleKind::BalancedRandomForest:
    case EnsembleKind::BalancedBagging: {
      double sum = 0.0;
      for (const EnsembleMember& member : model.members) {
        sum += predict_tree(member.tree, x);
      }
      return sum / static_cast<double>(model.members.size());
    }
    case EnsembleKind::RUSBoost:
      return chain_margin_score(model, 0, model.members.size(), x);
    case EnsembleKind::EasyEnsemble: {
      if (model.subset_sizes.empty()) {
        return chain_margin_score(model, 0, model.members.size(), x);
      }
      double sum = 0.0;
      std::size_t begin = 0;
      for (const std::size_t len : model.subset_sizes) {
        sum += chain_margin_score(model, begin, begin + len, x);
        begin += len;
      }
      return sum / static_cast<double>(model.subset_sizes.size());
    }
  }
  throw InvalidArgument("predict_score: unknown ensemble kind");
}

std::vector<double> predict_scores(const EnsembleModel& model, const EncodedMatrix& X,
                                   int threads) {
  std::vector<double> scores(X.rows, 0.0);
  parallel_for(X.rows, threads, [&](std::size_t i) { scores[i] = predict_score(model, X.row(i)); });
  return scores;
}

std::vector<double> ensemble_importances(const EnsembleModel& model) {
  if (model.members.empty()) throw EmptyInput("ensemble_importances: ensemble has no members");
  const std::size_t p = model.members.front().tree.columns();
  std::vector<double> acc(p, 0.0);
  double total_alpha = 0.0;
  for (const EnsembleMember& member : model.members) {
    total_alpha += member.alpha;
    const auto& imp = member.tree.importances;
    for (std::size_t j = 0; j < p; ++j) acc[j] += member.alpha * imp[j];
  }
  if (total_alpha > 0.0) {
    for (double& v : acc) v /= total_alpha;
  }
  const double sum = std::accumulate(acc.begin(), acc.end(), 0.0);
  if (sum > 0.0) {
    for (double& v : acc) v /= sum;
  } else {
    std::fill(acc.begin(), acc.end(), 0.0);
  }
  return acc;
}

}  // namespace balens
