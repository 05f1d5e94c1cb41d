#pragma once

#include <cstdint>
#include <string>

#include "drsplit/grid.hpp"
#include "drsplit/saddle.hpp"

namespace drsplit {

enum class Model { tv, huber };

std::string to_string(Model m);
Model parse_model(const std::string& name);

struct DenoiseSpec {
  Model model = Model::tv;
  double alpha = 0.5;
  double lambda = 0.05;  ///< huber only
  GridImage f;
};

/// F(u) = |u - f|^2/2, G = indicator of {|p|_inf <= alpha}, K = grad.
/// gamma1 = 1, gamma2 = 0, |K| <= sqrt(8). Starts at xbar = f, ybar = 0.
SaddleProblem build_rof(const GridImage& f, double alpha);

/// As build_rof with G(p) += lambda/2 |p|^2, so gamma2 = lambda.
SaddleProblem build_huber(const GridImage& f, double alpha, double lambda);

SaddleProblem build_denoise(const DenoiseSpec& spec);

/// Scalar problem F(x) = (x - a)^2/2, G(y) = y^2/2, K = k on R^1.
/// Saddle point x* = a/(1 + k^2), y* = k x*; gamma1 = gamma2 = 1.
SaddleProblem build_scalar_quadratic(double a = 1.0, double k = 1.0);

/// Adds stddev * N(0, 1) per pixel from SeededRng(seed), row-major order.
/// The result is not clipped.
GridImage add_gaussian_noise(const GridImage& img, double stddev, std::uint64_t seed);

/// Piecewise-smooth test scene in [0, 1]: a shaded background with a disc,
/// a rectangle and a soft ring.
GridImage synthetic_scene(std::size_t width, std::size_t height);

}  // namespace drsplit
