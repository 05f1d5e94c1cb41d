#include "drsplit/exactsolve.hpp"

#include <cmath>

#include "drsplit/errors.hpp"

namespace drsplit {
namespace {
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

Eigen::MatrixXd dct_matrix(std::size_t n) {
  Eigen::MatrixXd c(n, n);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double s = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      c(k, m) = (k == 0 ? s0 : s) *
                std::cos(M_PI * static_cast<double>((2 * m + 1) * k) / (2.0 * static_cast<double>(n)));
  return c;
}

DctPlan::DctPlan(std::size_t width, std::size_t height, double c)
    : width_(width), height_(height), c_(c), eigenvalues_(width * height),
      basis_w_(dct_matrix(width)), basis_h_(dct_matrix(height)) {
  if (width == 0 || height == 0) throw ContractViolation("DctPlan: empty grid");
  if (!(c >= 0.0)) throw ContractViolation("DctPlan: c must be nonnegative");
  for (std::size_t j = 0; j < height; ++j) {
    const double sj = std::sin(M_PI * static_cast<double>(j) / (2.0 * static_cast<double>(height)));
    for (std::size_t i = 0; i < width; ++i) {
      const double si = std::sin(M_PI * static_cast<double>(i) / (2.0 * static_cast<double>(width)));
      eigenvalues_[j * width + i] = 1.0 + c * (4.0 * si * si + 4.0 * sj * sj);
    }
  }
}

void DctPlan::forward(std::span<const double> u, std::span<double> coeffs) const {
  if (u.size() != width_ * height_ || coeffs.size() != u.size())
    throw ContractViolation("DctPlan::forward: size mismatch");
  Eigen::Map<const RowMajor> in(u.data(), height_, width_);
  Eigen::Map<RowMajor> out(coeffs.data(), height_, width_);
  RowMajor tmp(height_, width_);
  tmp.noalias() = basis_h_ * in;
  out.noalias() = tmp * basis_w_.transpose();
}

void DctPlan::inverse(std::span<const double> coeffs, std::span<double> u) const {
  if (u.size() != width_ * height_ || coeffs.size() != u.size())
    throw ContractViolation("DctPlan::inverse: size mismatch");
  Eigen::Map<const RowMajor> in(coeffs.data(), height_, width_);
  Eigen::Map<RowMajor> out(u.data(), height_, width_);
  RowMajor tmp(height_, width_);
  tmp.noalias() = basis_h_.transpose() * in;
  out.noalias() = tmp * basis_w_;
}

GridImage dct2_forward(const GridImage& u) {
  const DctPlan plan(u.width(), u.height(), 0.0);
  GridImage out(u.width(), u.height());
  plan.forward(u.values(), out.values());
  return out;
}

GridImage dct2_inverse(const GridImage& coeffs) {
  const DctPlan plan(coeffs.width(), coeffs.height(), 0.0);
  GridImage out(coeffs.width(), coeffs.height());
  plan.inverse(coeffs.values(), out.values());
  return out;
}

void solve_elliptic(std::span<const double> b, const DctPlan& plan, std::span<double> d) {
  if (b.size() != plan.width() * plan.height() || d.size() != b.size())
    throw ContractViolation("solve_elliptic: dimensions do not match the plan");
  Vec coeffs(b.size());
  plan.forward(b, coeffs);
  const auto eig = plan.eigenvalues();
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] /= eig[k];
  plan.inverse(coeffs, d);
}

GridImage solve_elliptic(const GridImage& b, const DctPlan& plan) {
  GridImage d(b.width(), b.height());
  solve_elliptic(b.values(), plan, d.values());
  return d;
}

EllipticSolver EllipticSolver::dct(std::size_t width, std::size_t height, double c) {
  auto plan = std::make_shared<const DctPlan>(width, height, c);
  return EllipticSolver(width * height, c, [plan](std::span<const double> b, std::span<double> d) {
    solve_elliptic(b, *plan, d);
  });
}

}  // namespace drsplit
