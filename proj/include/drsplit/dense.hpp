#pragma once

// Dense small-grid oracles. Used by tests and the selftest; solvers never
// call into this header.

#include <cstddef>

#include <Eigen/Dense>

#include "drsplit/linops.hpp"

namespace drsplit {

using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDenseSizeGuard = 4096;

/// Applies op to each canonical basis vector. Refuses op.cols > 4096.
DenseMatrix dense_materialize(const LinearOperator& op);

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError
/// when a pivot falls below 1e-12 times the largest entry of A.
Vec dense_solve(const DenseMatrix& a, std::span<const double> b);

/// Symmetric eigenvalues in ascending order (symmetrizes the input).
Eigen::VectorXd symmetric_eigenvalues(const DenseMatrix& a);

/// Spectral norm (largest singular value).
double spectral_norm(const DenseMatrix& a);

}  // namespace drsplit
