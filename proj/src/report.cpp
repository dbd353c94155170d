#include "balens/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

#include "balens/csv.hpp"
#include "balens/errors.hpp"
#include "balens/text.hpp"

namespace balens {

namespace {

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
  }
  return area;
}

double parse_cell(const std::string& token, const std::string& path, bool allow_inf) {
  if (allow_inf && token == "inf") return std::numeric_limits<double>::infinity();
  const auto value = parse_double(token);
  if (!value) throw MalformedCsv(path + ": bad numeric cell '" + token + "'");
  return *value;
}

}  // namespace

RocCurve read_roc_csv(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  const std::vector<std::string> expected = {"threshold", "fpr", "tpr"};
  if (table.header != expected) throw MalformedCsv(path + ": expected threshold,fpr,tpr header");
  RocCurve curve;
  curve.points.reserve(table.records.size());
  for (const auto& record : table.records) {
    RocPoint p;
    p.threshold = parse_cell(record[0], path, true);
    p.fpr = parse_cell(record[1], path, false);
    p.tpr = parse_cell(record[2], path, false);
    curve.points.push_back(p);
  }
  curve.auc = trapezoid_area(curve.points);
  return curve;
}

namespace {

// Fixed plot geometry; the data-space group maps the unit square onto the
// plot rectangle with y flipped.
constexpr double kPlotLeft = 70.0;
constexpr double kPlotTop = 50.0;
constexpr double kPlotWidth = 540.0;
constexpr double kPlotHeight = 410.0;
constexpr double kCanvasWidth = 640.0;
constexpr double kCanvasHeight = 520.0;

const char* kFoldPalette[] = {
    "#8bb8d8", "#9fc6a8", "#d8b88b", "#c5a3cd", "#d89b9b",
    "#a8c0d0", "#c0cc96", "#d0ae98", "#b0a8d8", "#98c8c0",
};

std::string svg_points(const std::vector<RocPoint>& points) {
  std::string out;
  for (const RocPoint& p : points) {
    if (!out.empty()) out += ' ';
    out += format_double(p.fpr);
    out += ',';
    out += format_double(p.tpr);
  }
  return out;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_roc_svg(const std::string& title, const std::vector<RocSeries>& series) {
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
         format_fixed(kCanvasWidth, 0) + " " + format_fixed(kCanvasHeight, 0) +
         "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"" + format_fixed(kCanvasWidth, 0) + "\" height=\"" +
         format_fixed(kCanvasHeight, 0) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + format_fixed(kCanvasWidth / 2, 0) +
         "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" + xml_escape(title) +
         "</text>\n";

  // Frame and ticks live in canvas space.
  const double bottom = kPlotTop + kPlotHeight;
  svg += "<rect x=\"" + format_fixed(kPlotLeft, 0) + "\" y=\"" + format_fixed(kPlotTop, 0) +
         "\" width=\"" + format_fixed(kPlotWidth, 0) + "\" height=\"" +
         format_fixed(kPlotHeight, 0) + "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = i / 5.0;
    const double x = kPlotLeft + t * kPlotWidth;
    const double y = bottom - t * kPlotHeight;
    svg += "<line x1=\"" + format_fixed(x, 1) + "\" y1=\"" + format_fixed(bottom, 1) +
           "\" x2=\"" + format_fixed(x, 1) + "\" y2=\"" + format_fixed(bottom + 6, 1) +
           "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + format_fixed(x, 1) + "\" y=\"" + format_fixed(bottom + 22, 1) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + format_fixed(t, 1) + "</text>\n";
    svg += "<line x1=\"" + format_fixed(kPlotLeft - 6, 1) + "\" y1=\"" + format_fixed(y, 1) +
           "\" x2=\"" + format_fixed(kPlotLeft, 1) + "\" y2=\"" + format_fixed(y, 1) +
           "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + format_fixed(kPlotLeft - 10, 1) + "\" y=\"" + format_fixed(y + 4, 1) +
           "\" text-anchor=\"end\" font-size=\"12\">" + format_fixed(t, 1) + "</text>\n";
  }
  svg += "<text x=\"" + format_fixed(kPlotLeft + kPlotWidth / 2, 1) + "\" y=\"" +
         format_fixed(bottom + 45, 1) +
         "\" text-anchor=\"middle\" font-size=\"14\">False positive rate</text>\n";
  svg += "<text x=\"20\" y=\"" + format_fixed(kPlotTop + kPlotHeight / 2, 1) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
         format_fixed(kPlotTop + kPlotHeight / 2, 1) +
         ")\">True positive rate</text>\n";

  // Curves are drawn in data space; non-scaling strokes keep line widths in
  // canvas units despite the anisotropic scale.
  svg += "<g transform=\"translate(" + format_fixed(kPlotLeft, 0) + "," +
         format_fixed(bottom, 0) + ") scale(" + format_fixed(kPlotWidth, 0) + ",-" +
         format_fixed(kPlotHeight, 0) + ")\" fill=\"none\">\n";
  svg += "<line x1=\"0\" y1=\"0\" x2=\"1\" y2=\"1\" stroke=\"#999999\" "
         "stroke-dasharray=\"0.012,0.012\" vector-effect=\"non-scaling-stroke\"/>\n";
  std::size_t fold_index = 0;
  for (const RocSeries& s : series) {
    if (s.emphasis) continue;
    const char* color = kFoldPalette[fold_index % (sizeof(kFoldPalette) / sizeof(char*))];
    ++fold_index;
    svg += "<polyline points=\"" + svg_points(s.curve.points) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.2\" vector-effect=\"non-scaling-stroke\"/>\n";
  }
  for (const RocSeries& s : series) {
    if (!s.emphasis) continue;
    svg += "<polyline points=\"" + svg_points(s.curve.points) +
           "\" stroke=\"#1f4e79\" stroke-width=\"2.5\" "
           "vector-effect=\"non-scaling-stroke\"/>\n";
  }
  svg += "</g>\n";

  // Legend in the lower right corner of the plot.
  double ly = bottom - 16.0 - 18.0 * static_cast<double>(series.size());
  const double lx = kPlotLeft + kPlotWidth - 190.0;
  fold_index = 0;
  for (const RocSeries& s : series) {
    const bool bold = s.emphasis;
    const char* color =
        bold ? "#1f4e79" : kFoldPalette[fold_index % (sizeof(kFoldPalette) / sizeof(char*))];
    if (!bold) ++fold_index;
    svg += "<line x1=\"" + format_fixed(lx, 1) + "\" y1=\"" + format_fixed(ly - 4, 1) +
           "\" x2=\"" + format_fixed(lx + 26, 1) + "\" y2=\"" + format_fixed(ly - 4, 1) +
           "\" stroke=\"" + color + "\" stroke-width=\"" + (bold ? "2.5" : "1.2") + "\"/>\n";
    std::string label = xml_escape(s.name);
    if (bold) label += " (AUC " + format_fixed(s.curve.auc, 3) + ")";
    svg += "<text x=\"" + format_fixed(lx + 32, 1) + "\" y=\"" + format_fixed(ly, 1) +
           "\" font-size=\"12\">" + label + "</text>\n";
    ly += 18.0;
  }
  svg += "</svg>\n";
  return svg;
}

std::string top_features_text(const std::vector<RankedFeature>& features) {
  std::size_t width = 0;
  for (const RankedFeature& rf : features) width = std::max(width, rf.name.size());
  std::string out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    std::string rank = std::to_string(i + 1);
    if (rank.size() < 2) rank.insert(0, 2 - rank.size(), ' ');
    std::string name = features[i].name;
    name.resize(width, ' ');
    out += rank + ". " + name + "  " + format_fixed(features[i].score, 6) + "\n";
  }
  return out;
}

void write_report_assets(const std::string& eval_dir, const std::string& out_dir,
                         EnsembleKind kind, std::size_t top_k) {
  namespace fs = std::filesystem;
  const fs::path in_root(eval_dir);
  const fs::path sub = in_root / dir_label(kind);
  if (!fs::exists(sub / "roc_pooled.csv")) {
    throw IoError("no evaluation output for '" + cli_token(kind) + "' under " + eval_dir);
  }

  std::vector<RocSeries> series;
  for (std::size_t k = 0;; ++k) {
    const fs::path fold_file = sub / ("roc_fold" + std::to_string(k) + ".csv");
    if (!fs::exists(fold_file)) break;
    series.push_back({"fold " + std::to_string(k), read_roc_csv(fold_file.string()), false});
  }
  series.push_back({"pooled", read_roc_csv((sub / "roc_pooled.csv").string()), true});

  // The importance file is already sorted per classifier block.
  std::vector<RankedFeature> ranked;
  const CsvTable table = read_csv_file((in_root / "importance.csv").string());
  const std::vector<std::string> expected = {"classifier", "feature", "score"};
  if (table.header != expected) {
    throw MalformedCsv(eval_dir + "/importance.csv: expected classifier,feature,score header");
  }
  const std::string wanted = dir_label(kind);
  for (const auto& record : table.records) {
    if (record[0] != wanted) continue;
    if (top_k != 0 && ranked.size() >= top_k) break;
    const auto score = parse_double(record[2]);
    if (!score) {
      throw MalformedCsv(eval_dir + "/importance.csv: bad score '" + record[2] + "'");
    }
    ranked.push_back({record[1], *score});
  }
  if (ranked.empty()) {
    throw EmptyReport("importance.csv has no rows for '" + cli_token(kind) + "'");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const std::string svg = render_roc_svg(display_label(kind) + " ROC", series);
  const auto write_text = [](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
  };
  write_text(fs::path(out_dir) / "roc.svg", svg);
  write_text(fs::path(out_dir) / "top_features.txt", top_features_text(ranked));
}

}  // namespace balens
