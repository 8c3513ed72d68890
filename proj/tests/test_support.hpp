#pragma once

// Generators shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pcarf/data.hpp"
#include "pcarf/matrix.hpp"
#include "pcarf/rng.hpp"

namespace pcarf::testing {

inline Matrix random_symmetric(std::size_t n, Rng& rng, double scale = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-scale, scale);
  return m;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-scale, scale);
  return m;
}

// Box-Muller from the project Rng, so fixtures are identical everywhere.
inline double normal(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Two isotropic Gaussians in `dims` dimensions whose means differ by
// `separation` along every axis; label = component index.
inline LabeledDataset two_gaussians(std::size_t n, std::size_t dims, double separation, std::uint64_t seed,
                                    double positive_share = 0.5) {
  Rng rng(seed);
  LabeledDataset ds;
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = rng.uniform() < positive_share ? 1 : 0;
    ds.labels.push_back(label);
    for (std::size_t d = 0; d < dims; ++d) values.push_back(normal(rng) + (label ? separation : 0.0));
  }
  ds.features = Matrix(n, dims, std::move(values));
  for (std::size_t d = 0; d < dims; ++d) ds.feature_names.push_back("f" + std::to_string(d));
  return ds;
}

inline std::string to_csv(const LabeledDataset& ds, bool with_id = true) {
  std::string out = with_id ? "id," : "";
  for (const auto& name : ds.feature_names) out += name + ",";
  out += "class\n";
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (with_id) out += std::to_string(r) + ",";
    for (std::size_t c = 0; c < ds.dimension(); ++c) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", ds.features(r, c));
      out += std::string(buf) + ",";
    }
    out += std::to_string(ds.labels[r]) + "\n";
  }
  return out;
}

}  // namespace pcarf::testing
