#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pcarf {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  std::size_t positives() const noexcept { return tp + fn; }
  std::size_t negatives() const noexcept { return tn + fp; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws std::invalid_argument on length mismatch, empty input, or values
// outside {0, 1}.
ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions,
                          int positive_label = 1);

// Set when a metric's denominator is zero; the metric is then reported as 0.
enum MetricWarning : std::uint32_t {
  kNoWarning = 0,
  kSensitivityUndefined = 1u << 0,  // no actual positives
  kSpecificityUndefined = 1u << 1,  // no actual negatives
  kPrecisionUndefined = 1u << 2,    // no predicted positives
  kF1Undefined = 1u << 3,           // tp = fp = fn = 0
};

// All values are percentages.
struct MetricsReport {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::uint32_t warnings = kNoWarning;
};

// Throws std::invalid_argument on an all-zero matrix.
MetricsReport metrics_report(const ConfusionMatrix& cm);

// 100 * num / den truncated (not rounded) to three decimals, computed in
// integers: truncated_percent(20, 57) == "35.087". "0.000" when den == 0.
std::string truncated_percent(std::size_t num, std::size_t den);

// Row labels of the comparison tables, in order.
inline constexpr std::array<const char*, 5> kMetricNames = {"Accuracy", "Sensitivity",
                                                            "Specificity", "Precision", "F1 Score"};

// The five metrics of kMetricNames as exact truncated percentages.
std::array<std::string, 5> metric_cells(const ConfusionMatrix& cm);
std::string warning_text(std::uint32_t warnings);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
  double auc = 0.0;
};

// Thresholds sweep the distinct scores from high to low, predicting positive
// when score >= threshold; tied scores form one step. AUC by trapezoids.
// Throws std::domain_error unless both classes are present.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels,
                   int positive_label = 1);

// "fpr,tpr" header, one point per line, then "# auc,<value>".
void write_roc_csv(std::ostream& out, const RocCurve& curve);
// Throws DataError on malformed input.
RocCurve read_roc_csv(std::istream& in);

struct NamedConfusion {
  std::string name;
  ConfusionMatrix cm;
};

// name,tp,fp,tn,fn,accuracy,sensitivity,specificity,precision,f1,warnings
void write_metrics_csv(std::ostream& out, std::span<const NamedConfusion> rows);

struct TableColumn {
  std::string header;
  std::array<std::string, 5> cells;  // in kMetricNames order
};

// Aligned text table, one row per metric name, one column per entry.
std::string metrics_table(std::span<const TableColumn> columns, const std::string& title = {});

}  // namespace pcarf
