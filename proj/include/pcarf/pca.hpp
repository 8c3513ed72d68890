#pragma once

#include <cstddef>
#include <iosfwd>
#include <variant>
#include <vector>

#include "pcarf/matrix.hpp"

namespace pcarf {

struct FixedComponents {
  std::size_t k = 0;
};

// Smallest k whose cumulative explained variance reaches the fraction.
struct VarianceThreshold {
  double fraction = 0.95;
};

using ComponentPolicy = std::variant<FixedComponents, VarianceThreshold>;

struct PcaModel {
  std::vector<double> mean;         // p
  std::vector<double> scales;       // p, empty when fit without standardization
  Matrix components;                // p x k, orthonormal columns
  std::vector<double> eigenvalues;  // k, non-increasing, >= 0
  double total_variance = 0.0;      // sum of all p eigenvalues

  std::size_t input_dimension() const noexcept { return mean.size(); }
  std::size_t output_dimension() const noexcept { return components.cols(); }
  bool standardized() const noexcept { return !scales.empty(); }

  friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

// Fits on the rows of x. With standardize on, columns are divided by their
// sample standard deviation before the covariance; a zero-variance column
// keeps scale 1. Throws std::domain_error for fewer than 2 rows and
// std::invalid_argument for k > p or a fraction outside (0, 1].
PcaModel fit_pca(const Matrix& x, const ComponentPolicy& policy, bool standardize);

// ((x - mean) / scales) * components; throws std::invalid_argument on a
// column-count mismatch.
Matrix transform(const PcaModel& model, const Matrix& x);

std::vector<double> explained_variance_ratio(const PcaModel& model);

// Plain-text model format, see docs/formats.md.
void write_pca(std::ostream& out, const PcaModel& model);
PcaModel read_pca(std::istream& in);

}  // namespace pcarf
