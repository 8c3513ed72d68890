#include "pcarf/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "pcarf/errors.hpp"
#include "pcarf/rng.hpp"
#include "pcarf/text_io.hpp"

namespace pcarf {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// -[y log s(z) + (1 - y) log(1 - s(z))]
double cross_entropy(double logit, int label) { return softplus(logit) - (label == 1 ? logit : 0.0); }

void check_input(const MlpModel& model, std::size_t size) {
  if (model.weights.empty()) throw std::invalid_argument("mlp: model has no layers");
  if (size != model.input_size()) {
    throw std::invalid_argument("mlp: input has " + std::to_string(size) + " features, model expects " +
                                std::to_string(model.input_size()));
  }
}

// Activations of every layer; acts[0] is the (scaled) input, acts.back()
// holds the output logit.
void run_layers(const MlpModel& model, std::span<const double> x, std::vector<std::vector<double>>& acts) {
  const std::size_t layers = model.weights.size();
  acts.resize(layers + 1);
  acts[0].assign(x.begin(), x.end());
  if (!model.input_mean.empty()) {
    for (std::size_t i = 0; i < acts[0].size(); ++i) {
      acts[0][i] = (acts[0][i] - model.input_mean[i]) / model.input_scale[i];
    }
  }
  for (std::size_t l = 0; l < layers; ++l) {
    const Matrix& w = model.weights[l];
    auto& out = acts[l + 1];
    out.assign(model.biases[l].begin(), model.biases[l].end());
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const auto wr = w.row(r);
      double acc = out[r];
      for (std::size_t c = 0; c < wr.size(); ++c) acc += wr[c] * acts[l][c];
      out[r] = (l + 1 < layers) ? std::max(acc, 0.0) : acc;
    }
  }
}

MlpGradient zero_gradient(const MlpModel& model) {
  MlpGradient g;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    g.weights.emplace_back(model.weights[l].rows(), model.weights[l].cols());
    g.biases.emplace_back(model.biases[l].size(), 0.0);
  }
  return g;
}

}  // namespace

std::vector<std::size_t> MlpModel::layer_sizes() const {
  std::vector<std::size_t> sizes;
  if (weights.empty()) return sizes;
  sizes.push_back(weights.front().cols());
  for (const auto& w : weights) sizes.push_back(w.rows());
  return sizes;
}

MlpModel init_mlp(std::span<const std::size_t> layer_sizes, std::uint64_t seed, MlpInit scheme) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("init_mlp: need at least 2 layer sizes");
  if (layer_sizes.back() != 1) throw std::invalid_argument("init_mlp: output layer must have size 1");
  for (std::size_t s : layer_sizes)
    if (s == 0) throw std::invalid_argument("init_mlp: layer sizes must be positive");

  Rng rng(seed);
  MlpModel model;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const std::size_t fan_in = layer_sizes[l];
    Matrix w(layer_sizes[l + 1], fan_in);
    if (scheme == MlpInit::kUniform) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (double& v : w.data()) v = rng.uniform(-bound, bound);
    }
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(layer_sizes[l + 1], 0.0);
  }
  return model;
}

double output_logit(const MlpModel& model, std::span<const double> x) {
  check_input(model, x.size());
  std::vector<std::vector<double>> acts;
  run_layers(model, x, acts);
  return acts.back()[0];
}

double forward(const MlpModel& model, std::span<const double> x) {
  return logistic(output_logit(model, x));
}

std::vector<double> forward_batch(const MlpModel& model, const Matrix& x) {
  check_input(model, x.cols());
  std::vector<double> out(x.rows());
  std::vector<std::vector<double>> acts;
#pragma omp parallel for schedule(static) firstprivate(acts)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(x.rows()); ++r) {
    run_layers(model, x.row(static_cast<std::size_t>(r)), acts);
    out[static_cast<std::size_t>(r)] = logistic(acts.back()[0]);
  }
  return out;
}

double loss_and_gradient(const MlpModel& model, const Matrix& x, std::span<const int> labels,
                         std::span<const std::size_t> rows, MlpGradient& gradient) {
  check_input(model, x.cols());
  if (labels.size() != x.rows()) throw std::invalid_argument("mlp: label count mismatch");
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(x.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    rows = all;
  }
  if (rows.empty()) throw std::invalid_argument("mlp: no samples");

  gradient = zero_gradient(model);
  const std::size_t layers = model.weights.size();
  std::vector<std::vector<double>> acts;
  std::vector<double> delta;
  std::vector<double> prev_delta;
  double loss = 0.0;

  for (std::size_t r : rows) {
    run_layers(model, x.row(r), acts);
    const double z = acts.back()[0];
    loss += cross_entropy(z, labels[r]);
    delta.assign(1, logistic(z) - static_cast<double>(labels[r]));

    for (std::size_t l = layers; l-- > 0;) {
      const Matrix& w = model.weights[l];
      auto& gw = gradient.weights[l];
      for (std::size_t i = 0; i < w.rows(); ++i) {
        gradient.biases[l][i] += delta[i];
        auto gr = gw.row(i);
        for (std::size_t j = 0; j < w.cols(); ++j) gr[j] += delta[i] * acts[l][j];
      }
      if (l == 0) break;
      prev_delta.assign(w.cols(), 0.0);
      for (std::size_t i = 0; i < w.rows(); ++i) {
        const auto wr = w.row(i);
        for (std::size_t j = 0; j < w.cols(); ++j) prev_delta[j] += wr[j] * delta[i];
      }
      // Rectifier derivative, taken as 0 at the kink.
      for (std::size_t j = 0; j < prev_delta.size(); ++j)
        if (acts[l][j] <= 0.0) prev_delta[j] = 0.0;
      delta.swap(prev_delta);
    }
  }

  const double inv = 1.0 / static_cast<double>(rows.size());
  for (std::size_t l = 0; l < layers; ++l) {
    for (double& v : gradient.weights[l].data()) v *= inv;
    for (double& v : gradient.biases[l]) v *= inv;
  }
  return loss * inv;
}

double mean_loss(const MlpModel& model, const Matrix& x, std::span<const int> labels) {
  check_input(model, x.cols());
  if (labels.size() != x.rows() || labels.empty()) throw std::invalid_argument("mlp: label count mismatch");
  double loss = 0.0;
  std::vector<std::vector<double>> acts;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    run_layers(model, x.row(r), acts);
    loss += cross_entropy(acts.back()[0], labels[r]);
  }
  return loss / static_cast<double>(x.rows());
}

MlpModel train_mlp(MlpModel model, const LabeledDataset& train, const MlpTrainOptions& options,
                   std::vector<double>* loss_history) {
  if (train.size() == 0) throw std::invalid_argument("train_mlp: empty training set");
  train.validate();
  check_input(model, train.dimension());
  if (options.batch_size == 0) throw std::invalid_argument("train_mlp: batch_size must be >= 1");

  if (options.standardize) {
    const std::size_t n = train.size();
    const std::size_t p = train.dimension();
    model.input_mean.assign(p, 0.0);
    model.input_scale.assign(p, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < p; ++c) model.input_mean[c] += train.features(r, c);
    for (auto& m : model.input_mean) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < p; ++c) {
        const double d = train.features(r, c) - model.input_mean[c];
        model.input_scale[c] += d * d;
      }
    for (auto& s : model.input_scale) {
      s = n > 1 ? std::sqrt(s / static_cast<double>(n - 1)) : 0.0;
      if (!(s > 0.0)) s = 1.0;
    }
  }

  Rng rng(options.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  MlpGradient gradient;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t stop = std::min(order.size(), start + options.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      loss_and_gradient(model, train.features, train.labels, batch, gradient);
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        auto w = model.weights[l].data();
        const auto gw = gradient.weights[l].data();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= options.learning_rate * gw[i];
        for (std::size_t i = 0; i < model.biases[l].size(); ++i) {
          model.biases[l][i] -= options.learning_rate * gradient.biases[l][i];
        }
      }
    }
    if (loss_history) loss_history->push_back(mean_loss(model, train.features, train.labels));
  }
  for (const auto& w : model.weights)
    for (double v : w.data())
      if (!std::isfinite(v)) throw NumericalError("train_mlp: weights diverged");
  return model;
}

void write_mlp(std::ostream& out, const MlpModel& model) {
  const auto sizes = model.layer_sizes();
  out << "mlp " << sizes.size();
  for (std::size_t s : sizes) out << ' ' << s;
  out << '\n' << "input_scaling " << (model.input_mean.empty() ? 0 : 1) << '\n';
  if (!model.input_mean.empty()) {
    write_values(out, "input_mean", model.input_mean);
    write_values(out, "input_scale", model.input_scale);
  }
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (std::size_t r = 0; r < model.weights[l].rows(); ++r) {
      write_values(out, "weights_row", model.weights[l].row(r));
    }
    write_values(out, "bias", model.biases[l]);
  }
}

MlpModel read_mlp(std::istream& in) {
  TokenReader reader(in);
  reader.expect("mlp");
  const std::size_t count = reader.next_size();
  if (count < 2) throw DataError("mlp block: need at least 2 layer sizes");
  std::vector<std::size_t> sizes(count);
  for (auto& s : sizes) {
    s = reader.next_size();
    if (s == 0) throw DataError("mlp block: zero layer size");
  }
  if (sizes.back() != 1) throw DataError("mlp block: output size must be 1");
  MlpModel model;
  reader.expect("input_scaling");
  const std::size_t scaled = reader.next_size();
  if (scaled > 1) throw DataError("mlp block: bad input_scaling flag");
  if (scaled == 1) {
    model.input_mean = read_values(reader, "input_mean", sizes[0]);
    model.input_scale = read_values(reader, "input_scale", sizes[0]);
    for (double s : model.input_scale)
      if (!(s > 0.0)) throw DataError("mlp block: input_scale must be positive");
  }
  for (std::size_t l = 0; l + 1 < count; ++l) {
    std::vector<double> w;
    w.reserve(sizes[l + 1] * sizes[l]);
    for (std::size_t r = 0; r < sizes[l + 1]; ++r) {
      auto row = read_values(reader, "weights_row", sizes[l]);
      w.insert(w.end(), row.begin(), row.end());
    }
    model.weights.emplace_back(sizes[l + 1], sizes[l], std::move(w));
    model.biases.push_back(read_values(reader, "bias", sizes[l + 1]));
  }
  return model;
}

}  // namespace pcarf
