#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "pcarf/forest.hpp"
#include "pcarf/matrix.hpp"
#include "pcarf/mlp.hpp"
#include "pcarf/pca.hpp"

namespace pcarf {

// Everything `evaluate` needs to score raw feature rows: optional PCA
// projection followed by one classifier.
struct PipelineModel {
  std::optional<PcaModel> pca;
  std::variant<ForestModel, MlpModel> classifier;
  int positive_label = 1;

  std::size_t input_dimension() const;
};

// Positive-class scores in [0, 1] for raw rows.
std::vector<double> score_rows(const PipelineModel& model, const Matrix& raw);
// score >= 0.5 maps to the positive label.
std::vector<int> threshold_scores(std::span<const double> scores, int positive_label);

void write_pipeline(std::ostream& out, const PipelineModel& model);
PipelineModel read_pipeline(std::istream& in);
void save_pipeline(const std::filesystem::path& path, const PipelineModel& model);
PipelineModel load_pipeline(const std::filesystem::path& path);

}  // namespace pcarf
