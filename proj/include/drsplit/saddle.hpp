#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "drsplit/exactsolve.hpp"
#include "drsplit/gap.hpp"
#include "drsplit/grid.hpp"
#include "drsplit/linops.hpp"

namespace drsplit {

/// min_x max_y <Kx, y> + F(x) - G(y), described by its resolvents.
struct SaddleProblem {
  using Prox = std::function<void(std::span<const double>, double, std::span<double>)>;
  using Value = std::function<double(std::span<const double>)>;
  using Gap = std::function<GapReport(std::span<const double>, std::span<const double>)>;

  std::size_t primal_dim = 0;
  std::size_t dual_dim = 0;
  /// Grid shape of the primal variable; zero for problems off a grid.
  std::size_t width = 0;
  std::size_t height = 0;

  Prox prox_f;  ///< (xhat, sigma) -> (I + sigma dF)^{-1} xhat
  Prox prox_g;  ///< (yhat, tau) -> (I + tau dG)^{-1} yhat
  LinearOperator K;
  double normK = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  Value f_value;
  Value g_value;  ///< may return +inf outside dom G
  Gap gap;
  /// Exact solver for (I + c K^*K) d = b.
  std::function<EllipticSolver(double)> make_elliptic;

  Vec initial_x;  ///< xbar^0
  Vec initial_y;  ///< ybar^0

  bool on_grid() const noexcept { return width * height == primal_dim && primal_dim > 0; }

  /// <Kx, y> + F(x) - G(y).
  double lagrangian(std::span<const double> x, std::span<const double> y) const;
};

/// Checks <Kx, y> = <x, K^*y> on sampled pairs (relative tolerance tol).
bool check_adjoint(const LinearOperator& op, int samples, double tol, std::uint64_t seed);

}  // namespace drsplit
