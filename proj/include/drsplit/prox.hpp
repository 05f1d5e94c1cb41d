#pragma once

#include <span>

#include "drsplit/grid.hpp"

namespace drsplit {

/// Resolvent of F(u) = |u - f|^2 / 2: (xhat + sigma f) / (1 + sigma).
GridImage prox_quadratic_fidelity(const GridImage& xhat, const GridImage& f, double sigma);
void prox_quadratic_fidelity(std::span<const double> xhat, std::span<const double> f,
                             double sigma, std::span<double> out);

/// Projection onto {max_i |p_i|_2 <= alpha}, with |p_i|_2 the Euclidean norm
/// of the per-pixel 2-vector (isotropic convention).
DualField project_inf_ball(const DualField& phat, double alpha);
void project_inf_ball(std::span<const double> phat, double alpha, std::span<double> out);

/// Resolvent of G(p) = I{|p|_inf <= alpha} + lambda/2 |p|^2 with step tau.
///
/// The minimizer of |q - phat|^2/(2 tau) + lambda/2 |q|^2 over the disc
/// |q| <= alpha satisfies (q - phat)/tau + lambda q + mu q = 0 with mu >= 0
/// the multiplier of the disc constraint, so q = phat / (1 + tau lambda + tau mu)
/// is a positive multiple of phat. Without the constraint q = phat/(1 + tau lambda);
/// if that point leaves the disc, the active constraint puts q on the circle
/// along the same ray. Both cases equal projecting phat/(1 + tau lambda) radially.
DualField prox_huber_dual(const DualField& phat, double alpha, double lambda, double tau);
void prox_huber_dual(std::span<const double> phat, double alpha, double lambda, double tau,
                     std::span<double> out);

}  // namespace drsplit
