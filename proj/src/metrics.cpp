#include "balens/metrics.hpp"

#include <algorithm>
#include <limits>

#include "balens/errors.hpp"

namespace balens {

namespace {

// value / denom with the zero-denominator convention.
double ratio(double value, double denom, bool& degenerate) {
  if (denom <= 0.0) {
    degenerate = true;
    return 0.0;
  }
  return value / denom;
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw LengthMismatch("confusion: label lists differ in length");
  }
  if (y_true.empty()) throw EmptyInput("confusion: no labels");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i]) {
      (y_pred[i] ? cm.tp : cm.fn) += 1.0;
    } else {
      (y_pred[i] ? cm.fp : cm.tn) += 1.0;
    }
  }
  return cm;
}

MetricsRecord compute_metrics(const ConfusionMatrix& cm) {
  if (cm.tp < 0.0 || cm.fp < 0.0 || cm.fn < 0.0 || cm.tn < 0.0) {
    throw InvalidArgument("compute_metrics: negative confusion entries");
  }
  if (cm.total() <= 0.0) throw EmptyConfusion("compute_metrics: all-zero matrix");

  MetricsRecord m;
  m.accuracy = (cm.tp + cm.tn) / cm.total();
  m.recall = ratio(cm.tp, cm.tp + cm.fn, m.degenerate);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp, m.degenerate);
  m.balanced_accuracy = (m.recall + m.specificity) / 2.0;
  m.precision_positive = ratio(cm.tp, cm.tp + cm.fp, m.degenerate);
  const double precision_negative = ratio(cm.tn, cm.tn + cm.fn, m.degenerate);
  m.precision_macro = (m.precision_positive + precision_negative) / 2.0;
  m.f1_positive = ratio(2.0 * cm.tp, 2.0 * cm.tp + cm.fp + cm.fn, m.degenerate);
  const double f1_negative = ratio(2.0 * cm.tn, 2.0 * cm.tn + cm.fn + cm.fp, m.degenerate);
  m.f1_macro = (m.f1_positive + f1_negative) / 2.0;
  return m;
}

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) {
    throw LengthMismatch("roc_curve: labels and scores differ in length");
  }
  double pos = 0.0;
  double neg = 0.0;
  for (const int label : y_true) (label ? pos : neg) += 1.0;
  if (pos == 0.0 || neg == 0.0) throw SingleClassDataset("roc_curve: both classes required");

  // Rows sorted by score descending; tied scores form one threshold step.
  std::vector<std::size_t> order(y_true.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  double cum_tp = 0.0;
  double cum_fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      (y_true[order[i]] ? cum_tp : cum_fp) += 1.0;
      ++i;
    }
    curve.points.push_back({cum_fp / neg, cum_tp / pos, t});
  }

  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const RocPoint& a = curve.points[k - 1];
    const RocPoint& b = curve.points[k];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return curve;
}

double auc_oracle(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) {
    throw LengthMismatch("auc_oracle: labels and scores differ in length");
  }
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    (y_true[i] ? pos : neg).push_back(scores[i]);
  }
  if (pos.empty() || neg.empty()) throw SingleClassDataset("auc_oracle: both classes required");
  double wins = 0.0;
  for (const double p : pos) {
    for (const double n : neg) {
      if (p > n) {
        wins += 1.0;
      } else if (p == n) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

ConfusionRates average_confusions(std::span<const ConfusionMatrix> cms) {
  if (cms.empty()) throw EmptyList("average_confusions: no matrices");
  ConfusionRates avg{{{0.0, 0.0}, {0.0, 0.0}}};
  for (const ConfusionMatrix& cm : cms) {
    const double neg_row = cm.tn + cm.fp;
    const double pos_row = cm.fn + cm.tp;
    if (neg_row <= 0.0 || pos_row <= 0.0) {
      throw ZeroRow("average_confusions: a matrix has an empty actual class");
    }
    avg[0][0] += cm.tn / neg_row;
    avg[0][1] += cm.fp / neg_row;
    avg[1][0] += cm.fn / pos_row;
    avg[1][1] += cm.tp / pos_row;
  }
  const double k = static_cast<double>(cms.size());
  for (auto& row : avg) {
    for (double& cell : row) cell /= k;
  }
  return avg;
}

}  // namespace balens
