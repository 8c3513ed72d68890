#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcarf/config.hpp"
#include "pcarf/data.hpp"
#include "pcarf/metrics.hpp"

namespace pcarf {

inline constexpr const char* kForest = "forest";
inline constexpr const char* kMlp = "mlp";

struct CellResult {
  std::string model;  // kForest or kMlp
  bool pca = false;
  std::uint64_t seed = 0;
  ConfusionMatrix cm;
  MetricsReport metrics;
  std::optional<double> auc;       // empty when the test set is single-class
  std::string roc_file;            // relative to the output directory
  std::string model_file;          // relative; empty unless models are saved
  std::size_t components = 0;      // retained PCA components
  double explained_variance = 0.0; // cumulative ratio of the retained ones
};

struct CellAggregate {
  std::string model;
  bool pca = false;
  std::array<double, 5> mean{};    // kMetricNames order
  std::array<double, 5> stddev{};  // sample standard deviation; 0 for one seed
  std::optional<double> auc_mean;
  std::optional<double> auc_stddev;
};

// Random-forest accuracy without vs. with PCA on one seed.
struct DirectionCheck {
  std::uint64_t seed = 0;
  double accuracy_without = 0.0;
  double accuracy_with = 0.0;
  bool without_beats_with = false;
};

struct RunReport {
  std::vector<CellResult> cells;  // ordered by (model, pca, seed)
  std::vector<CellAggregate> aggregates;
  std::vector<DirectionCheck> direction;
  std::vector<std::uint64_t> seeds;
};

// Runs every (model, pca, seed) cell on `data` and writes into
// config.output_dir: metrics.csv, comparison.txt, summary.json, roc/*.csv
// and, when enabled, models/*.model.
RunReport run_experiment(const ExperimentConfig& config, const LabeledDataset& data);
// Loads config.dataset first.
RunReport run_experiment(const ExperimentConfig& config);

std::string cell_stem(const std::string& model, bool pca, std::uint64_t seed);
std::string display_name(const std::string& model);

}  // namespace pcarf
