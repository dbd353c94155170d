#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "balens/ensemble.hpp"
#include "balens/eval.hpp"
#include "balens/metrics.hpp"

namespace balens {

// Reads a (threshold, fpr, tpr) file written by write_report and recomputes
// the trapezoidal area; the "inf" threshold of the first point round-trips.
// Throws IoError, MalformedCsv.
RocCurve read_roc_csv(const std::string& path);

// One plotted curve. Emphasised series (the pooled curve) are drawn bold
// and carry their area in the legend.
struct RocSeries {
  std::string name;
  RocCurve curve;
  bool emphasis = false;
};

// Self-contained SVG document: per-series polylines, a dashed chance
// diagonal, axes with fixed ticks and a legend. No external assets, so the
// file renders anywhere as is.
std::string render_roc_svg(const std::string& title, const std::vector<RocSeries>& series);

// Plain-text ranking, one "rank. name score" line per feature.
std::string top_features_text(const std::vector<RankedFeature>& features);

// Renders roc.svg and top_features.txt for one classifier into out_dir from
// the files an evaluation run left in eval_dir (its importance.csv plus the
// per-classifier roc files). Throws IoError when inputs are missing,
// EmptyReport when the classifier does not appear in importance.csv.
void write_report_assets(const std::string& eval_dir, const std::string& out_dir,
                         EnsembleKind kind, std::size_t top_k);

}  // namespace balens
