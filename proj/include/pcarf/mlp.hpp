#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pcarf/data.hpp"
#include "pcarf/matrix.hpp"

namespace pcarf {

// Feed-forward network: rectifier hidden layers, one logistic output unit.
// The output is P(label = 1).
struct MlpModel {
  std::vector<Matrix> weights;               // layer l: sizes[l+1] x sizes[l]
  std::vector<std::vector<double>> biases;   // layer l: sizes[l+1]
  // Optional z-scoring applied to inputs before the first layer.
  std::vector<double> input_mean;
  std::vector<double> input_scale;

  std::size_t input_size() const noexcept { return weights.empty() ? 0 : weights.front().cols(); }
  std::vector<std::size_t> layer_sizes() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

enum class MlpInit {
  kUniform,  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases
  kZero,
};

// Throws std::invalid_argument unless there are >= 2 sizes, all positive,
// and the last is 1.
MlpModel init_mlp(std::span<const std::size_t> layer_sizes, std::uint64_t seed,
                  MlpInit scheme = MlpInit::kUniform);

// Pre-activation of the output unit.
double output_logit(const MlpModel& model, std::span<const double> x);
// logistic(output_logit), in (0, 1). Throws std::invalid_argument on size mismatch.
double forward(const MlpModel& model, std::span<const double> x);
std::vector<double> forward_batch(const MlpModel& model, const Matrix& x);

// Same shapes as the model parameters.
struct MlpGradient {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Mean binary cross-entropy over `rows` of (x, labels) and its gradient by
// backpropagation. An empty `rows` means all rows.
double loss_and_gradient(const MlpModel& model, const Matrix& x, std::span<const int> labels,
                         std::span<const std::size_t> rows, MlpGradient& gradient);
double mean_loss(const MlpModel& model, const Matrix& x, std::span<const int> labels);

struct MlpTrainOptions {
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  // Fit input_mean/input_scale on the training features first.
  bool standardize = true;
};

// Mini-batch gradient descent on binary cross-entropy. Rows are reshuffled
// every epoch from Rng(seed). When `loss_history` is given, the mean
// training loss after each epoch is appended to it.
MlpModel train_mlp(MlpModel model, const LabeledDataset& train, const MlpTrainOptions& options,
                   std::vector<double>* loss_history = nullptr);

void write_mlp(std::ostream& out, const MlpModel& model);
MlpModel read_mlp(std::istream& in);

}  // namespace pcarf
