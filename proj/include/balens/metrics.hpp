#pragma once

#include <array>
#include <span>
#include <vector>

namespace balens {

// Four-way outcome counts. Entries are reals so averaged matrices fit the
// same type.
struct ConfusionMatrix {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;

  double total() const { return tp + fp + fn + tn; }
};

// Throws LengthMismatch, EmptyInput.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct MetricsRecord {
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;
  double recall = 0.0;       // positive class (sensitivity)
  double specificity = 0.0;  // negative class
  double precision_macro = 0.0;
  double f1_macro = 0.0;
  double precision_positive = 0.0;
  double f1_positive = 0.0;
  // Some denominator was zero; the affected metrics were forced to 0.
  bool degenerate = false;
};

// Evaluates every figure of merit from the counts. Zero-denominator metrics
// evaluate to 0 and set the degenerate flag; balanced accuracy is computed
// literally as (recall + specificity) / 2 so the identity is exact. Macro
// averages are unweighted two-class means. Throws EmptyConfusion when the
// matrix is all zero, InvalidArgument on negative entries.
MetricsRecord compute_metrics(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Sweeps thresholds over the distinct scores in descending order, predicting
// positive when score >= threshold; tied scores collapse into one step. The
// curve starts at (0, 0) with an infinite threshold and ends at (1, 1); auc
// is the trapezoidal area. Throws LengthMismatch, SingleClassDataset.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

// Exact Mann-Whitney statistic by (positive, negative) pair enumeration,
// ties counting one half. Equals the trapezoidal area; kept as an
// independent cross-check. Throws LengthMismatch, SingleClassDataset.
double auc_oracle(std::span<const int> y_true, std::span<const double> scores);

// Row-normalized rates, rows by actual class, columns by predicted class:
// [[tn, fp], [fn, tp]] with each row summing to 1.
using ConfusionRates = std::array<std::array<double, 2>, 2>;

// Normalizes each matrix row-wise (per true class), then averages
// element-wise. Throws EmptyList, ZeroRow when some matrix has an empty
// actual class.
ConfusionRates average_confusions(std::span<const ConfusionMatrix> cms);

}  // namespace balens
