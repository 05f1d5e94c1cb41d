#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>

#include <Eigen/Dense>

#include "drsplit/grid.hpp"

namespace drsplit {

/// Orthonormal DCT-II basis of size n: row k is s_k cos(pi (2m+1) k / (2n)).
Eigen::MatrixXd dct_matrix(std::size_t n);

/// Orthonormal 2-D DCT-II, applied along the width and the height.
GridImage dct2_forward(const GridImage& u);
GridImage dct2_inverse(const GridImage& coeffs);

/// Diagonalization of T = I + c K^*K for the Neumann gradient. Immutable,
/// shareable across threads. The transforms multiply by the materialized
/// cosine matrices, O(n^2) per grid line.
class DctPlan {
 public:
  DctPlan(std::size_t width, std::size_t height, double c);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  double c() const noexcept { return c_; }
  /// entry (i, j) at j*width + i: 1 + c (4 sin^2(pi i/(2w)) + 4 sin^2(pi j/(2h))).
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }

  void forward(std::span<const double> u, std::span<double> coeffs) const;
  void inverse(std::span<const double> coeffs, std::span<double> u) const;

 private:
  std::size_t width_;
  std::size_t height_;
  double c_;
  Vec eigenvalues_;
  Eigen::MatrixXd basis_w_;
  Eigen::MatrixXd basis_h_;
};

/// d with (I + c K^*K) d = b.
GridImage solve_elliptic(const GridImage& b, const DctPlan& plan);
void solve_elliptic(std::span<const double> b, const DctPlan& plan, std::span<double> d);

/// Exact solver for T d = b with T = I + c K^*K, as a reusable handle.
class EllipticSolver {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;

  EllipticSolver(std::size_t dim, double c, Fn solve) : dim_(dim), c_(c), solve_(std::move(solve)) {}

  static EllipticSolver dct(std::size_t width, std::size_t height, double c);

  std::size_t dim() const noexcept { return dim_; }
  double c() const noexcept { return c_; }
  void solve(std::span<const double> b, std::span<double> d) const { solve_(b, d); }

 private:
  std::size_t dim_;
  double c_;
  Fn solve_;
};

}  // namespace drsplit
