#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "drsplit/grid.hpp"

namespace drsplit {

/// Forward differences with homogeneous Neumann boundary. The last column
/// of comp1 and the last row of comp2 are zero.
DualField grad_apply(const GridImage& u);
void grad_apply(std::size_t width, std::size_t height, std::span<const double> u,
                std::span<double> p);

/// Negative adjoint of grad_apply: <grad u, p> = -<u, div p> exactly.
GridImage div_apply(const DualField& p);
void div_apply(std::size_t width, std::size_t height, std::span<const double> p,
               std::span<double> out);

/// u + c * K^*K u with K = grad, i.e. u - c * div(grad u).
GridImage normal_apply(const GridImage& u, double c);
void normal_apply(std::size_t width, std::size_t height, std::span<const double> u, double c,
                  std::span<double> out);

/// Matrix-free linear map R^cols -> R^rows together with its adjoint.
struct LinearOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, std::span<double>)> adjoint;

  Vec operator()(std::span<const double> x) const;
  Vec transpose(std::span<const double> y) const;
};

LinearOperator gradient_operator(std::size_t width, std::size_t height);
LinearOperator normal_operator(std::size_t width, std::size_t height, double c);
LinearOperator identity_operator(std::size_t n);
LinearOperator zero_operator(std::size_t rows, std::size_t cols);
/// Multiplication by a scalar, x -> s * x on R^1. Handy for toy problems.
LinearOperator scalar_operator(double s);

/// Power iteration on K^*K from a seeded start vector. Returns the running
/// maximum of the Rayleigh-quotient estimates sqrt(<K^*K v, v>) with
/// |v| = 1, which never exceeds |K| and does not decrease with iters.
double power_norm(const LinearOperator& op, int iters, std::uint64_t seed);

}  // namespace drsplit
