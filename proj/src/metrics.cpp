#include "pcarf/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pcarf/errors.hpp"
#include "pcarf/text_io.hpp"

namespace pcarf {

namespace {

void require_binary(std::span<const int> values, const char* what) {
  for (int v : values)
    if (v != 0 && v != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

double percent(std::size_t num, std::size_t den, std::uint32_t flag, std::uint32_t& warnings) {
  if (den == 0) {
    warnings |= flag;
    return 0.0;
  }
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions,
                          int positive_label) {
  if (labels.size() != predictions.size()) {
    throw std::invalid_argument("confusion: " + std::to_string(labels.size()) + " labels vs " +
                                std::to_string(predictions.size()) + " predictions");
  }
  if (labels.empty()) throw std::invalid_argument("confusion: no samples");
  require_binary(labels, "labels");
  require_binary(predictions, "predictions");
  require_binary(std::span<const int>(&positive_label, 1), "positive_label");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == positive_label;
    const bool predicted = predictions[i] == positive_label;
    if (actual && predicted) {
      ++cm.tp;
    } else if (actual) {
      ++cm.fn;
    } else if (predicted) {
      ++cm.fp;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

MetricsReport metrics_report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("metrics_report: empty confusion matrix");
  MetricsReport r;
  r.accuracy = percent(cm.tp + cm.tn, cm.total(), kNoWarning, r.warnings);
  r.sensitivity = percent(cm.tp, cm.tp + cm.fn, kSensitivityUndefined, r.warnings);
  r.specificity = percent(cm.tn, cm.tn + cm.fp, kSpecificityUndefined, r.warnings);
  r.precision = percent(cm.tp, cm.tp + cm.fp, kPrecisionUndefined, r.warnings);
  r.f1 = percent(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, kF1Undefined, r.warnings);
  return r;
}

std::string truncated_percent(std::size_t num, std::size_t den) {
  if (den == 0) return "0.000";
  const auto scaled = static_cast<unsigned long long>(num) * 100000ULL / den;
  std::string frac = std::to_string(scaled % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(scaled / 1000) + "." + frac;
}

std::array<std::string, 5> metric_cells(const ConfusionMatrix& cm) {
  return {truncated_percent(cm.tp + cm.tn, cm.total()),
          truncated_percent(cm.tp, cm.tp + cm.fn),
          truncated_percent(cm.tn, cm.tn + cm.fp),
          truncated_percent(cm.tp, cm.tp + cm.fp),
          truncated_percent(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn)};
}

std::string warning_text(std::uint32_t warnings) {
  std::string out;
  auto add = [&](std::uint32_t flag, const char* name) {
    if ((warnings & flag) == 0) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kSensitivityUndefined, "sensitivity_undefined");
  add(kSpecificityUndefined, "specificity_undefined");
  add(kPrecisionUndefined, "precision_undefined");
  add(kF1Undefined, "f1_undefined");
  return out;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels, int positive_label) {
  if (scores.size() != labels.size()) throw std::invalid_argument("roc_curve: length mismatch");
  require_binary(labels, "labels");
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("roc_curve: non-finite score");

  std::size_t positives = 0;
  for (int l : labels) positives += l == positive_label ? 1 : 0;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::domain_error("roc_curve: both classes must be present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      if (labels[order[i]] == positive_label) {
        ++tp;
      } else {
        ++fp;
      }
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
  }
  if (curve.points.back() != RocPoint{1.0, 1.0}) curve.points.push_back({1.0, 1.0});

  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return curve;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
  out << "# auc," << format_double(curve.auc) << '\n';
}

RocCurve read_roc_csv(std::istream& in) {
  auto parse = [](std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw DataError("roc csv line " + std::to_string(line_no) + ": bad number '" +
                      std::string(s) + "'");
    }
    return v;
  };

  RocCurve curve;
  bool have_auc = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "fpr,tpr") throw DataError("roc csv: expected header 'fpr,tpr'");
      continue;
    }
    if (line.rfind("# auc,", 0) == 0) {
      curve.auc = parse(std::string_view(line).substr(6), line_no);
      have_auc = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("roc csv line " + std::to_string(line_no) + ": missing ','");
    const std::string_view view(line);
    const RocPoint p{parse(view.substr(0, comma), line_no), parse(view.substr(comma + 1), line_no)};
    if (p.fpr < 0.0 || p.fpr > 1.0 || p.tpr < 0.0 || p.tpr > 1.0) {
      throw DataError("roc csv line " + std::to_string(line_no) + ": point outside [0,1]");
    }
    if (!curve.points.empty() &&
        (p.fpr < curve.points.back().fpr || p.tpr < curve.points.back().tpr)) {
      throw DataError("roc csv line " + std::to_string(line_no) + ": curve is not monotone");
    }
    curve.points.push_back(p);
  }
  if (line_no == 0) throw DataError("roc csv: empty input");
  if (curve.points.size() < 2) throw DataError("roc csv: need at least two points");
  if (!have_auc) throw DataError("roc csv: missing '# auc,' footer");
  return curve;
}

void write_metrics_csv(std::ostream& out, std::span<const NamedConfusion> rows) {
  out << "name,tp,fp,tn,fn,accuracy,sensitivity,specificity,precision,f1,warnings\n";
  for (const auto& row : rows) {
    const auto cells = metric_cells(row.cm);
    out << row.name << ',' << row.cm.tp << ',' << row.cm.fp << ',' << row.cm.tn << ','
        << row.cm.fn;
    for (const auto& c : cells) out << ',' << c;
    out << ',' << warning_text(metrics_report(row.cm).warnings) << '\n';
  }
}

std::string metrics_table(std::span<const TableColumn> columns, const std::string& title) {
  std::size_t label_width = std::string("Performance Metrics").size();
  std::vector<std::size_t> widths;
  for (const auto& col : columns) {
    std::size_t w = col.header.size();
    for (const auto& cell : col.cells) w = std::max(w, cell.size());
    widths.push_back(w);
  }
  auto pad_right = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  auto pad_left = [](const std::string& s, std::size_t w) { return std::string(w - s.size(), ' ') + s; };

  std::ostringstream out;
  if (!title.empty()) out << title << '\n';
  std::string header = pad_right("Performance Metrics", label_width);
  for (std::size_t c = 0; c < columns.size(); ++c) header += " | " + pad_left(columns[c].header, widths[c]);
  out << header << '\n' << std::string(header.size(), '-') << '\n';
  for (std::size_t r = 0; r < kMetricNames.size(); ++r) {
    out << pad_right(kMetricNames[r], label_width);
    for (std::size_t c = 0; c < columns.size(); ++c) out << " | " << pad_left(columns[c].cells[r], widths[c]);
    out << '\n';
  }
  return out.str();
}

}  // namespace pcarf
