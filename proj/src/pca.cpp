#include "pcarf/pca.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "pcarf/errors.hpp"
#include "pcarf/linalg.hpp"
#include "pcarf/text_io.hpp"

namespace pcarf {

namespace {

std::size_t choose_k(const ComponentPolicy& policy, const std::vector<double>& values, double total) {
  const std::size_t p = values.size();
  if (const auto* fixed = std::get_if<FixedComponents>(&policy)) {
    if (fixed->k == 0 || fixed->k > p) {
      throw std::invalid_argument("fit_pca: k = " + std::to_string(fixed->k) +
                                  " outside [1, " + std::to_string(p) + "]");
    }
    return fixed->k;
  }
  const double fraction = std::get<VarianceThreshold>(policy).fraction;
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fit_pca: variance fraction must lie in (0, 1]");
  }
  if (total <= 0.0) return 1;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    cumulative += values[k];
    if (cumulative / total >= fraction - 1e-12) return k + 1;
  }
  return p;
}

}  // namespace

PcaModel fit_pca(const Matrix& x, const ComponentPolicy& policy, bool standardize) {
  if (x.rows() < 2) throw std::domain_error("fit_pca: need at least 2 rows");
  auto [centered, mean] = mean_center(x);
  PcaModel model;
  model.mean = std::move(mean);

  const std::size_t n = centered.rows();
  const std::size_t p = centered.cols();
  if (standardize) {
    model.scales.assign(p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = centered.row(r);
      for (std::size_t c = 0; c < p; ++c) model.scales[c] += row[c] * row[c];
    }
    for (auto& s : model.scales) {
      s = std::sqrt(s / static_cast<double>(n - 1));
      if (!(s > 0.0)) s = 1.0;
    }
    for (std::size_t r = 0; r < n; ++r) {
      auto row = centered.row(r);
      for (std::size_t c = 0; c < p; ++c) row[c] /= model.scales[c];
    }
  }

  auto eig = eigh_symmetric(covariance(centered));
  // The covariance is positive semi-definite; negative values are rounding.
  for (auto& v : eig.values) v = std::max(v, 0.0);
  double total = 0.0;
  for (double v : eig.values) total += v;
  model.total_variance = total;

  const std::size_t k = choose_k(policy, eig.values, total);
  model.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
  model.components = Matrix(p, k);
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = 0; c < k; ++c) model.components(r, c) = eig.vectors(r, c);
  return model;
}

Matrix transform(const PcaModel& model, const Matrix& x) {
  const std::size_t p = model.input_dimension();
  if (x.cols() != p) {
    throw std::invalid_argument("pca transform: input has " + std::to_string(x.cols()) +
                                " columns, model expects " + std::to_string(p));
  }
  const std::size_t k = model.output_dimension();
  Matrix out(x.rows(), k);
  std::vector<double> z(p);
#pragma omp parallel for schedule(static) firstprivate(z)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(x.rows()); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    const auto row = x.row(r);
    for (std::size_t c = 0; c < p; ++c) {
      z[c] = row[c] - model.mean[c];
      if (model.standardized()) z[c] /= model.scales[c];
    }
    auto dst = out.row(r);
    for (std::size_t c = 0; c < p; ++c) {
      const auto comp = model.components.row(c);
      for (std::size_t j = 0; j < k; ++j) dst[j] += z[c] * comp[j];
    }
  }
  return out;
}

std::vector<double> explained_variance_ratio(const PcaModel& model) {
  std::vector<double> out(model.eigenvalues.size(), 0.0);
  if (model.total_variance <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = model.eigenvalues[i] / model.total_variance;
  return out;
}

void write_pca(std::ostream& out, const PcaModel& model) {
  const std::size_t p = model.input_dimension();
  const std::size_t k = model.output_dimension();
  out << "pca " << p << ' ' << k << ' ' << (model.standardized() ? 1 : 0) << '\n';
  out << "total_variance " << format_double(model.total_variance) << '\n';
  write_values(out, "mean", model.mean);
  if (model.standardized()) write_values(out, "scales", model.scales);
  write_values(out, "eigenvalues", model.eigenvalues);
  for (std::size_t r = 0; r < p; ++r) write_values(out, "component_row", model.components.row(r));
}

PcaModel read_pca(std::istream& in) {
  TokenReader reader(in);
  reader.expect("pca");
  const auto p = reader.next_size();
  const auto k = reader.next_size();
  const auto standardized = reader.next_size();
  if (k > p || standardized > 1) throw DataError("pca block: bad header");
  PcaModel model;
  reader.expect("total_variance");
  model.total_variance = reader.next_double();
  model.mean = read_values(reader, "mean", p);
  if (standardized == 1) model.scales = read_values(reader, "scales", p);
  model.eigenvalues = read_values(reader, "eigenvalues", k);
  std::vector<double> comps;
  comps.reserve(p * k);
  for (std::size_t r = 0; r < p; ++r) {
    auto row = read_values(reader, "component_row", k);
    comps.insert(comps.end(), row.begin(), row.end());
  }
  model.components = Matrix(p, k, std::move(comps));
  return model;
}

}  // namespace pcarf
