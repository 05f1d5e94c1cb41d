#include "drsplit/problems.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "drsplit/errors.hpp"
#include "drsplit/gap.hpp"
#include "drsplit/linops.hpp"
#include "drsplit/prox.hpp"
#include "drsplit/random.hpp"

namespace drsplit {
namespace {

SaddleProblem grid_problem(const GridImage& f, double alpha) {
  if (!(alpha > 0.0)) throw ContractViolation("denoising problem: alpha must be positive");
  if (!f.all_finite()) throw ContractViolation("denoising problem: data not finite");
  SaddleProblem pr;
  const std::size_t w = f.width(), h = f.height();
  pr.width = w;
  pr.height = h;
  pr.primal_dim = w * h;
  pr.dual_dim = 2 * w * h;
  pr.K = gradient_operator(w, h);
  pr.normK = std::sqrt(8.0);
  pr.gamma1 = 1.0;
  auto data = std::make_shared<const GridImage>(f);
  pr.prox_f = [data](std::span<const double> xhat, double sigma, std::span<double> out) {
    prox_quadratic_fidelity(xhat, data->values(), sigma, out);
  };
  pr.f_value = [data](std::span<const double> u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double d = u[i] - data->vector()[i];
      s += d * d;
    }
    return 0.5 * s;
  };
  pr.make_elliptic = [w, h](double c) { return EllipticSolver::dct(w, h, c); };
  pr.initial_x = f.vector();
  pr.initial_y.assign(2 * w * h, 0.0);
  return pr;
}

double indicator(std::span<const double> p, double alpha) {
  const std::size_t n = p.size() / 2;
  for (std::size_t i = 0; i < n; ++i)
    if (std::hypot(p[i], p[n + i]) - alpha > 1e-9 * alpha) return std::numeric_limits<double>::infinity();
  return 0.0;
}

}  // namespace

std::string to_string(Model m) { return m == Model::tv ? "tv" : "huber"; }

Model parse_model(const std::string& name) {
  if (name == "tv") return Model::tv;
  if (name == "huber") return Model::huber;
  throw ConfigError("unknown model '" + name + "'");
}

SaddleProblem build_rof(const GridImage& f, double alpha) {
  SaddleProblem pr = grid_problem(f, alpha);
  const std::size_t w = f.width(), h = f.height();
  pr.prox_g = [alpha](std::span<const double> phat, double, std::span<double> out) {
    project_inf_ball(phat, alpha, out);
  };
  pr.g_value = [alpha](std::span<const double> p) { return indicator(p, alpha); };
  auto data = std::make_shared<const GridImage>(f);
  pr.gap = [data, alpha, w, h](std::span<const double> u, std::span<const double> p) {
    return rof_gap(GridImage(w, h, Vec(u.begin(), u.end())), DualField(w, h, Vec(p.begin(), p.end())),
                   *data, alpha);
  };
  return pr;
}

SaddleProblem build_huber(const GridImage& f, double alpha, double lambda) {
  if (!(lambda > 0.0)) throw ContractViolation("build_huber: lambda must be positive");
  SaddleProblem pr = grid_problem(f, alpha);
  const std::size_t w = f.width(), h = f.height();
  pr.gamma2 = lambda;
  pr.prox_g = [alpha, lambda](std::span<const double> phat, double tau, std::span<double> out) {
    prox_huber_dual(phat, alpha, lambda, tau, out);
  };
  pr.g_value = [alpha, lambda](std::span<const double> p) {
    return indicator(p, alpha) + 0.5 * lambda * dot(p, p);
  };
  auto data = std::make_shared<const GridImage>(f);
  pr.gap = [data, alpha, lambda, w, h](std::span<const double> u, std::span<const double> p) {
    return huber_gap(GridImage(w, h, Vec(u.begin(), u.end())),
                     DualField(w, h, Vec(p.begin(), p.end())), *data, alpha, lambda);
  };
  return pr;
}

SaddleProblem build_denoise(const DenoiseSpec& spec) {
  return spec.model == Model::tv ? build_rof(spec.f, spec.alpha)
                                 : build_huber(spec.f, spec.alpha, spec.lambda);
}

SaddleProblem build_scalar_quadratic(double a, double k) {
  SaddleProblem pr;
  pr.primal_dim = pr.dual_dim = 1;
  pr.K = scalar_operator(k);
  pr.normK = std::abs(k);
  pr.gamma1 = pr.gamma2 = 1.0;
  pr.prox_f = [a](std::span<const double> x, double s, std::span<double> out) {
    out[0] = (x[0] + s * a) / (1.0 + s);
  };
  pr.prox_g = [](std::span<const double> y, double t, std::span<double> out) {
    out[0] = y[0] / (1.0 + t);
  };
  pr.f_value = [a](std::span<const double> x) { return 0.5 * (x[0] - a) * (x[0] - a); };
  pr.g_value = [](std::span<const double> y) { return 0.5 * y[0] * y[0]; };
  // F + G^*(Kx) + G + F^*(-K^*y) with G^*(z) = z^2/2, F^*(v) = a v + v^2/2.
  pr.gap = [a, k](std::span<const double> x, std::span<const double> y) {
    GapReport r;
    const double kx = k * x[0], ky = -k * y[0];
    r.primal_energy = 0.5 * (x[0] - a) * (x[0] - a) + 0.5 * kx * kx;
    r.dual_energy = 0.5 * y[0] * y[0] + a * ky + 0.5 * ky * ky;
    r.gap = r.primal_energy + r.dual_energy;
    r.per_pixel_gap = r.gap;
    return r;
  };
  pr.make_elliptic = [k](double c) {
    const double t = 1.0 + c * k * k;
    return EllipticSolver(1, c, [t](std::span<const double> b, std::span<double> d) { d[0] = b[0] / t; });
  };
  pr.initial_x = {0.0};
  pr.initial_y = {0.0};
  return pr;
}

GridImage add_gaussian_noise(const GridImage& img, double stddev, std::uint64_t seed) {
  if (!(stddev >= 0.0)) throw ContractViolation("add_gaussian_noise: stddev must be nonnegative");
  GridImage out = img;
  if (stddev == 0.0) return out;
  SeededRng rng(seed);
  for (auto& v : out.values()) v += stddev * rng.normal();
  return out;
}

GridImage synthetic_scene(std::size_t width, std::size_t height) {
  GridImage img(width, height);
  const double w = static_cast<double>(width), h = static_cast<double>(height);
  for (std::size_t j = 0; j < height; ++j)
    for (std::size_t i = 0; i < width; ++i) {
      const double x = (static_cast<double>(i) + 0.5) / w;
      const double y = (static_cast<double>(j) + 0.5) / h;
      double v = 0.25 + 0.2 * x + 0.1 * std::sin(3.0 * y);
      if (std::hypot(x - 0.35, y - 0.4) < 0.2) v = 0.8 - 0.3 * (y - 0.4);
      if (x > 0.6 && x < 0.9 && y > 0.55 && y < 0.85) v = 0.1;
      const double r = std::hypot(x - 0.72, y - 0.25);
      if (r > 0.08 && r < 0.14) v = 0.65 + 0.2 * std::cos(12.0 * r);
      img(i, j) = v;
    }
  return img;
}

}  // namespace drsplit
