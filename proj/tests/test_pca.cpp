#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "pcarf/errors.hpp"
#include "pcarf/linalg.hpp"
#include "pcarf/pca.hpp"
#include "test_support.hpp"

using namespace pcarf;

namespace {

double sample_variance(const Matrix& m, std::size_t col) {
  const auto v = m.column(col);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

Matrix correlated(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m = testing::random_matrix(n, p, rng);
  for (std::size_t r = 0; r < n; ++r) {
    m(r, 1) += 2.0 * m(r, 0);
    m(r, p - 1) = 0.5 * m(r, 1) - m(r, 2) + 0.1 * m(r, p - 1);
  }
  return m;
}

}  // namespace

TEST_CASE("points on y = x are rank one") {
  const Matrix x{{0, 0}, {1, 1}, {2, 2}, {-3, -3}};
  const auto model = fit_pca(x, VarianceThreshold{0.95}, false);
  CHECK(model.output_dimension() == 1);
  CHECK(explained_variance_ratio(model)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("three collinear points, no standardization") {
  const Matrix x{{0, 0}, {1, 1}, {2, 2}};
  const auto model = fit_pca(x, FixedComponents{2}, false);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(model.components(0, 0) == doctest::Approx(h).epsilon(1e-12));
  CHECK(model.components(1, 0) == doctest::Approx(h).epsilon(1e-12));
  CHECK(std::abs(model.eigenvalues[1]) < 1e-12);
  // Cross-check against the eigensolver on the hand-computed covariance [[1,1],[1,1]].
  const auto eig = eigh_symmetric(Matrix{{1, 1}, {1, 1}});
  CHECK(model.eigenvalues[0] == doctest::Approx(eig.values[0]).epsilon(1e-12));
}

TEST_CASE("variance threshold 1.0 on full-rank data keeps every component") {
  Rng rng(3);
  const Matrix x = testing::random_matrix(30, 5, rng);
  CHECK(fit_pca(x, VarianceThreshold{1.0}, true).output_dimension() == 5);
}

TEST_CASE("explained variance ratios") {
  PcaModel m;
  m.eigenvalues = {4.0, 0.0};
  m.total_variance = 4.0;
  CHECK(explained_variance_ratio(m) == std::vector<double>{1.0, 0.0});

  // Isotropic exact input: covariance = identity.
  const Matrix x{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const auto iso = fit_pca(x, FixedComponents{2}, false);
  const auto ratios = explained_variance_ratio(iso);
  CHECK(ratios[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ratios[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto model = fit_pca(correlated(80, 6, 1), VarianceThreshold{0.9}, true);
  const auto r = explained_variance_ratio(model);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sum += r[i];
    if (i) CHECK(r[i - 1] >= r[i]);
  }
  CHECK(sum <= 1.0 + 1e-8);
  CHECK(sum >= 0.9 - 1e-12);
}

TEST_CASE("transform") {
  const Matrix x = correlated(60, 5, 2);
  for (bool standardize : {false, true}) {
    CAPTURE(standardize);
    const auto model = fit_pca(x, FixedComponents{5}, standardize);
    const Matrix c = model.components;
    CHECK(max_abs_diff(matmul(c.transposed(), c), Matrix::identity(5)) < 1e-8);

    // The training mean projects to zero.
    const Matrix mean_row(1, 5, model.mean);
    const Matrix projected = transform(model, mean_row);
    for (double v : projected.data()) CHECK(std::abs(v) < 1e-12);

    // Scores have the eigenvalues as variances, and total variance is kept.
    const Matrix z = transform(model, x);
    double total = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(std::abs(sample_variance(z, k) - model.eigenvalues[k]) < 1e-8);
      total += sample_variance(z, k);
    }
    CHECK(std::abs(total - model.total_variance) < 1e-8);
  }
}

TEST_CASE("k = p transform is an isometry of centered data") {
  const Matrix x = correlated(25, 4, 9);
  const auto model = fit_pca(x, FixedComponents{4}, false);
  const Matrix z = transform(model, x);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = i + 1; j < x.rows(); ++j) {
      double dx = 0.0;
      double dz = 0.0;
      for (std::size_t c = 0; c < 4; ++c) {
        dx += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
        dz += (z(i, c) - z(j, c)) * (z(i, c) - z(j, c));
      }
      CHECK(std::abs(std::sqrt(dx) - std::sqrt(dz)) < 1e-8);
    }
}

TEST_CASE("fitting data already in the component basis gives the identity up to sign") {
  const Matrix x = correlated(50, 4, 12);
  const auto first = fit_pca(x, FixedComponents{4}, false);
  const auto second = fit_pca(transform(first, x), FixedComponents{4}, false);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(std::abs(std::abs(second.components(r, c)) - (r == c ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("row order does not change the model beyond eigenvector sign") {
  const Matrix x = correlated(40, 5, 21);
  std::vector<std::size_t> order(40);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(8);
  rng.shuffle(std::span<std::size_t>(order));
  const auto a = fit_pca(x, FixedComponents{5}, true);
  const auto b = fit_pca(x.select_rows(order), FixedComponents{5}, true);
  for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-10);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(std::abs(std::abs(a.components(r, c)) - std::abs(b.components(r, c))) < 1e-8);
    }
}

TEST_CASE("zero-variance columns keep scale 1 under standardization") {
  const Matrix x{{1, 7, 2}, {2, 7, 1}, {4, 7, 3}};
  const auto model = fit_pca(x, FixedComponents{3}, true);
  CHECK(model.scales[1] == 1.0);
  for (double v : transform(model, x).column(2)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("fit and transform errors") {
  CHECK_THROWS_AS(fit_pca(Matrix{{1, 2}}, VarianceThreshold{0.95}, true), std::domain_error);
  CHECK_THROWS_AS(fit_pca(Matrix{{1, 2}, {3, 4}}, FixedComponents{3}, true), std::invalid_argument);
  CHECK_THROWS_AS(fit_pca(Matrix{{1, 2}, {3, 4}}, VarianceThreshold{1.5}, true), std::invalid_argument);
  const auto model = fit_pca(Matrix{{1, 2}, {3, 5}, {0, 1}}, FixedComponents{1}, true);
  CHECK_THROWS_AS(transform(model, Matrix{{1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("model text format round-trips exactly") {
  for (bool standardize : {false, true}) {
    const auto model = fit_pca(correlated(30, 6, 4), VarianceThreshold{0.8}, standardize);
    std::stringstream buffer;
    write_pca(buffer, model);
    CHECK(read_pca(buffer) == model);
  }
  std::stringstream bad("pca 2 1 0\ntotal_variance 1\nmean 0\n");
  CHECK_THROWS_AS(read_pca(bad), DataError);
}
