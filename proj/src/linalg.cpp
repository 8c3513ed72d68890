#include "pcarf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pcarf/errors.hpp"

namespace pcarf {

CenteredData mean_center(const Matrix& m) {
  if (m.empty()) throw std::domain_error("mean_center: empty matrix");
  const std::size_t n = m.rows();
  const std::size_t p = m.cols();
  std::vector<double> mean(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < p; ++c) mean[c] += row[c];
  }
  for (auto& v : mean) v /= static_cast<double>(n);

  Matrix centered = m;
  for (std::size_t r = 0; r < n; ++r) {
    auto row = centered.row(r);
    for (std::size_t c = 0; c < p; ++c) row[c] -= mean[c];
  }
  return {std::move(centered), std::move(mean)};
}

namespace {

void require_rows(const Matrix& b) {
  if (b.rows() < 2) {
    throw std::domain_error("covariance: need at least 2 rows, got " + std::to_string(b.rows()));
  }
}

}  // namespace

Matrix covariance(const Matrix& centered) {
  require_rows(centered);
  const std::size_t n = centered.rows();
  const std::size_t p = centered.cols();
  const Matrix cols = centered.transposed();
  const double scale = 1.0 / static_cast<double>(n - 1);
  Matrix c(p, p);

  // Each entry is one dot product in a fixed order, so the result does not
  // depend on the thread count.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(p); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto xi = cols.row(i);
    for (std::size_t j = i; j < p; ++j) {
      const auto xj = cols.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += xi[k] * xj[k];
      c(i, j) = acc * scale;
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i);
  return c;
}

Matrix covariance_serial(const Matrix& centered) {
  require_rows(centered);
  const std::size_t n = centered.rows();
  const std::size_t p = centered.cols();
  Matrix c(p, p);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = centered.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      auto dst = c.row(i);
      for (std::size_t j = 0; j < p; ++j) dst[j] += x[i] * x[j];
    }
  }
  const double scale = 1.0 / static_cast<double>(n - 1);
  Matrix sym(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) sym(i, j) = 0.5 * (c(i, j) + c(j, i)) * scale;
  return sym;
}

namespace {

struct Rotation {
  std::size_t p = 0;
  std::size_t q = 0;
  double c = 1.0;
  double s = 0.0;
};

void validate_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::domain_error("eigh_symmetric: matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", not square");
  }
  double largest = 0.0;
  for (double v : a.data()) largest = std::max(largest, std::abs(v));
  const double limit = 1e-8 * std::max(1.0, largest);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > limit) {
        throw std::domain_error("eigh_symmetric: asymmetric at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
      }
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

// Rotation angle that zeroes a(p, q); identity rotation when the entry is
// already negligible.
Rotation make_rotation(const Matrix& a, std::size_t p, std::size_t q, double skip_below) {
  Rotation rot{p, q, 1.0, 0.0};
  const double apq = a(p, q);
  const double app = a(p, p);
  const double aqq = a(q, q);
  const double mag = std::abs(apq);
  if (mag <= skip_below) return rot;
  // Negligible next to both diagonal entries: rotating would not change them.
  if (std::abs(app) + 1e18 * mag == std::abs(app) && std::abs(aqq) + 1e18 * mag == std::abs(aqq)) {
    return rot;
  }
  const double theta = (aqq - app) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  rot.c = 1.0 / std::sqrt(t * t + 1.0);
  rot.s = t * rot.c;
  return rot;
}

bool is_identity(const Rotation& r) { return r.s == 0.0; }

// rows p, q of m  <-  Jᵀ m
void rotate_rows(Matrix& m, const Rotation& r) {
  auto rp = m.row(r.p);
  auto rq = m.row(r.q);
  for (std::size_t k = 0; k < rp.size(); ++k) {
    const double x = rp[k];
    const double y = rq[k];
    rp[k] = r.c * x - r.s * y;
    rq[k] = r.s * x + r.c * y;
  }
}

EigenDecomposition finish(Matrix a, Matrix vt, std::size_t sweeps) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out;
  out.sweeps = sweeps;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a(src, src);
    const auto v = vt.row(src);
    std::size_t lead = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v[k]) > std::abs(v[lead])) lead = k;
    const double sign = v[lead] < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = sign * v[k];
  }
  for (double v : out.values)
    if (!std::isfinite(v)) throw NumericalError("eigh_symmetric: non-finite eigenvalue");
  return out;
}

struct Thresholds {
  double converged;
  double skip;
};

Thresholds thresholds(const Matrix& a, const JacobiOptions& options) {
  // Rounding keeps the off-norm near n * eps * ||C||_F, so an absolute
  // tolerance below that floor is raised to it.
  const double n = static_cast<double>(std::max<std::size_t>(a.rows(), 1));
  const double floor = 4.0 * n * std::numeric_limits<double>::epsilon() * frobenius(a);
  const double converged = std::max(options.tolerance, floor);
  // Skipped entries contribute at most converged²/16 to the squared off-norm.
  const double skip = converged / (4.0 * n);
  return {converged, skip};
}

[[noreturn]] void not_converged(const JacobiOptions& options, double off) {
  throw NumericalError("eigh_symmetric: no convergence after " +
                       std::to_string(options.max_sweeps) +
                       " sweeps (off-diagonal norm " + std::to_string(off) + ")");
}

}  // namespace

EigenDecomposition eigh_symmetric_serial(const Matrix& c, const JacobiOptions& options) {
  validate_symmetric(c);
  const std::size_t n = c.rows();
  Matrix a = c;
  Matrix vt = Matrix::identity(n);
  const auto [converged, skip] = thresholds(a, options);

  std::size_t sweep = 0;
  for (;; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off < converged) break;
    if (sweep == options.max_sweeps) not_converged(options, off);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Rotation r = make_rotation(a, p, q, skip);
        if (is_identity(r)) continue;
        rotate_rows(a, r);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a(k, p);
          const double y = a(k, q);
          a(k, p) = r.c * x - r.s * y;
          a(k, q) = r.s * x + r.c * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        rotate_rows(vt, r);
      }
    }
  }
  return finish(std::move(a), std::move(vt), sweep);
}

EigenDecomposition eigh_symmetric(const Matrix& c, const JacobiOptions& options) {
  validate_symmetric(c);
  const std::size_t n = c.rows();
  Matrix a = c;
  Matrix vt = Matrix::identity(n);
  const auto [converged, skip] = thresholds(a, options);

  // Round-robin tournament over an even number of slots; slot n (odd n) is a
  // bye. Each round pairs every index exactly once, and a sweep of m - 1
  // rounds covers every (p, q) pair.
  const std::size_t m = n + (n % 2);
  std::vector<Rotation> round;
  round.reserve(m / 2);

  std::size_t sweep = 0;
  for (;; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off < converged) break;
    if (sweep == options.max_sweeps) not_converged(options, off);
    for (std::size_t r = 0; m > 1 && r + 1 < m; ++r) {
      round.clear();
      for (std::size_t k = 0; k < m / 2; ++k) {
        std::size_t x;
        std::size_t y;
        if (k == 0) {
          x = m - 1;
          y = r;
        } else {
          x = (r + k) % (m - 1);
          y = (r + m - 1 - k) % (m - 1);
        }
        if (x >= n || y >= n) continue;
        const Rotation rot = make_rotation(a, std::min(x, y), std::max(x, y), skip);
        if (!is_identity(rot)) round.push_back(rot);
      }
      if (round.empty()) continue;
      const auto count = static_cast<std::ptrdiff_t>(round.size());

      // The pairs are disjoint, so the rotations commute and each phase
      // touches independent data.
#pragma omp parallel
      {
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
          rotate_rows(a, round[static_cast<std::size_t>(i)]);
          rotate_rows(vt, round[static_cast<std::size_t>(i)]);
        }
#pragma omp for schedule(static)
        for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(n); ++kk) {
          auto row = a.row(static_cast<std::size_t>(kk));
          for (const Rotation& rot : round) {
            const double x = row[rot.p];
            const double y = row[rot.q];
            row[rot.p] = rot.c * x - rot.s * y;
            row[rot.q] = rot.s * x + rot.c * y;
          }
        }
      }
      for (const Rotation& rot : round) {
        a(rot.p, rot.q) = 0.0;
        a(rot.q, rot.p) = 0.0;
      }
    }
  }
  return finish(std::move(a), std::move(vt), sweep);
}

}  // namespace pcarf
