#pragma once

#include <cstddef>
#include <vector>

#include "pcarf/matrix.hpp"

namespace pcarf {

struct CenteredData {
  Matrix centered;
  std::vector<double> mean;
};

// Column means and the mean-subtracted copy. Throws std::domain_error on an
// empty matrix.
CenteredData mean_center(const Matrix& m);

// Sample covariance BᵀB / (n - 1) of already centered rows, symmetrized.
// Throws std::domain_error when n < 2.
Matrix covariance(const Matrix& centered);
// Single-threaded reference: accumulates row outer products, then (C + Cᵀ)/2.
Matrix covariance_serial(const Matrix& centered);

struct EigenDecomposition {
  std::vector<double> values;  // non-increasing
  Matrix vectors;              // column i pairs with values[i]
  std::size_t sweeps = 0;
};

struct JacobiOptions {
  // Converged once the off-diagonal Frobenius norm drops below
  // max(tolerance, 4 n eps ||C||_F); the second term is the rounding floor.
  double tolerance = 1e-10;
  std::size_t max_sweeps = 100;
};

// Symmetric eigendecomposition by Jacobi rotations. Rotations within a sweep
// follow a round-robin schedule of disjoint pairs, so each step updates rows
// and columns in parallel. Eigenvectors are sign-fixed so that their
// largest-magnitude component is positive.
//
// Throws std::domain_error on non-square input or asymmetry above 1e-8
// (relative to the largest entry when that exceeds 1), NumericalError when
// max_sweeps is exhausted.
EigenDecomposition eigh_symmetric(const Matrix& c, const JacobiOptions& options = {});

// Classic cyclic-by-row Jacobi, one rotation at a time. Reference for tests.
EigenDecomposition eigh_symmetric_serial(const Matrix& c, const JacobiOptions& options = {});

}  // namespace pcarf
