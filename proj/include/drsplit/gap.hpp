#pragma once

#include <span>
#include <utility>
#include <vector>

#include "drsplit/grid.hpp"

namespace drsplit {

struct SaddleProblem;

/// Primal and dual energies of a (u, p) pair. gap = primal + dual and is +inf
/// when p violates the constraint |p_i| <= alpha by more than 1e-9 alpha.
struct GapReport {
  double primal_energy = 0.0;
  double dual_energy = 0.0;
  double gap = 0.0;
  double per_pixel_gap = 0.0;
  double feasibility_violation = 0.0;  ///< max_i max(0, |p_i| - alpha)
};

/// Per-pixel Huber value: |q|^2/(2 lambda) if |q| <= alpha lambda,
/// alpha |q| - lambda alpha^2 / 2 otherwise.
double huber_value(double q_norm, double alpha, double lambda);

/// primal = |u - f|^2/2 + alpha sum_i |grad u_i|,
/// dual = |div p + f|^2/2 - |f|^2/2.
GapReport rof_gap(const GridImage& u, const DualField& p, const GridImage& f, double alpha);

/// primal = |u - f|^2/2 + sum_i huber(|grad u_i|),
/// dual = |div p + f|^2/2 - |f|^2/2 + lambda |p|^2/2.
GapReport huber_gap(const GridImage& u, const DualField& p, const GridImage& f, double alpha,
                    double lambda);

using PointSet = std::vector<Vec>;

/// max over (x', y') in X0 x Y0 of L(x, y') - L(x', y).
double restricted_gap(const SaddleProblem& problem, std::span<const double> x,
                      std::span<const double> y, const PointSet& x0, const PointSet& y0);

struct RestrictedErrors {
  double primal = 0.0;
  double dual = 0.0;
};

/// Primal and dual error functionals restricted to Y0 and X0, measured
/// against the saddle point (xs, ys).
RestrictedErrors restricted_errors(const SaddleProblem& problem, std::span<const double> x,
                                   std::span<const double> y, const PointSet& x0,
                                   const PointSet& y0, std::span<const double> xs,
                                   std::span<const double> ys);

}  // namespace drsplit
