#include "drsplit/prox.hpp"

#include <algorithm>
#include <cmath>

#include "drsplit/errors.hpp"
#include "drsplit/parallel.hpp"

namespace drsplit {

void prox_quadratic_fidelity(std::span<const double> xhat, std::span<const double> f,
                             double sigma, std::span<double> out) {
  if (xhat.size() != f.size() || out.size() != f.size())
    throw ContractViolation("prox_quadratic_fidelity: dimension mismatch");
  if (!(sigma > 0.0)) throw ContractViolation("prox_quadratic_fidelity: sigma must be positive");
  const double s = sigma / (1.0 + sigma);
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) out[k] = xhat[k] + (f[k] - xhat[k]) * s;
  });
}

GridImage prox_quadratic_fidelity(const GridImage& xhat, const GridImage& f, double sigma) {
  if (!xhat.same_shape(f)) throw ContractViolation("prox_quadratic_fidelity: dimension mismatch");
  GridImage out(f.width(), f.height());
  prox_quadratic_fidelity(xhat.values(), f.values(), sigma, out.values());
  return out;
}

void project_inf_ball(std::span<const double> phat, double alpha, std::span<double> out) {
  if (phat.size() % 2 != 0 || out.size() != phat.size())
    throw ContractViolation("project_inf_ball: malformed dual field");
  if (!(alpha > 0.0)) throw ContractViolation("project_inf_ball: alpha must be positive");
  const std::size_t n = phat.size() / 2;
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const double a = phat[k];
      const double c = phat[n + k];
      const double scale = std::max(1.0, std::hypot(a, c) / alpha);
      out[k] = a / scale;
      out[n + k] = c / scale;
    }
  });
}

DualField project_inf_ball(const DualField& phat, double alpha) {
  DualField out(phat.width(), phat.height());
  project_inf_ball(phat.data(), alpha, out.data());
  return out;
}

void prox_huber_dual(std::span<const double> phat, double alpha, double lambda, double tau,
                     std::span<double> out) {
  if (!(lambda >= 0.0) || !(tau > 0.0))
    throw ContractViolation("prox_huber_dual: need lambda >= 0 and tau > 0");
  const double shrink = 1.0 + tau * lambda;
  if (shrink == 1.0) {
    project_inf_ball(phat, alpha, out);
    return;
  }
  if (out.size() != phat.size()) throw ContractViolation("prox_huber_dual: size mismatch");
  Vec scaled(phat.size());
  for (std::size_t k = 0; k < phat.size(); ++k) scaled[k] = phat[k] / shrink;
  project_inf_ball(scaled, alpha, out);
}

DualField prox_huber_dual(const DualField& phat, double alpha, double lambda, double tau) {
  DualField out(phat.width(), phat.height());
  prox_huber_dual(phat.data(), alpha, lambda, tau, out.data());
  return out;
}

}  // namespace drsplit
