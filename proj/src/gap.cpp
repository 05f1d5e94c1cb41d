#include "drsplit/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drsplit/errors.hpp"
#include "drsplit/linops.hpp"
#include "drsplit/prox.hpp"
#include "drsplit/random.hpp"
#include "drsplit/saddle.hpp"

namespace drsplit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shapes(const GridImage& u, const DualField& p, const GridImage& f) {
  if (!u.same_shape(f) || !p.matches(u)) throw ContractViolation("gap: dimension mismatch");
}

double violation(const DualField& p, double alpha) {
  double v = 0.0;
  const auto p1 = p.comp1(), p2 = p.comp2();
  for (std::size_t i = 0; i < p.pixels(); ++i) v = std::max(v, std::hypot(p1[i], p2[i]) - alpha);
  return v;
}

double fidelity(const GridImage& u, const GridImage& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u.vector()[i] - f.vector()[i];
    s += d * d;
  }
  return 0.5 * s;
}

// |div p + f|^2/2 - |f|^2/2
double dual_fidelity(const DualField& p, const GridImage& f) {
  const GridImage dv = div_apply(p);
  double s = 0.0, ff = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = dv.vector()[i] + f.vector()[i];
    s += v * v;
    ff += f.vector()[i] * f.vector()[i];
  }
  return 0.5 * s - 0.5 * ff;
}

template <class PixelValue>
double regularizer(const GridImage& u, PixelValue&& value) {
  const DualField g = grad_apply(u);
  const auto g1 = g.comp1(), g2 = g.comp2();
  double s = 0.0;
  for (std::size_t i = 0; i < g.pixels(); ++i) s += value(std::hypot(g1[i], g2[i]));
  return s;
}

GapReport finish(double primal, double dual, double viol, std::size_t pixels) {
  GapReport r;
  r.primal_energy = primal;
  r.dual_energy = dual;
  r.gap = primal + dual;
  r.per_pixel_gap = r.gap / static_cast<double>(pixels);
  r.feasibility_violation = std::max(0.0, viol);
  return r;
}

}  // namespace

double huber_value(double q, double alpha, double lambda) {
  if (q <= alpha * lambda) return q * q / (2.0 * lambda);
  return alpha * q - lambda * alpha * alpha / 2.0;
}

GapReport rof_gap(const GridImage& u, const DualField& p, const GridImage& f, double alpha) {
  check_shapes(u, p, f);
  if (!(alpha > 0.0)) throw ContractViolation("rof_gap: alpha must be positive");
  const double primal = fidelity(u, f) + alpha * regularizer(u, [](double q) { return q; });
  const double viol = violation(p, alpha);
  if (viol > 1e-9 * alpha) return finish(primal, kInf, viol, u.size());
  const double dual = dual_fidelity(project_inf_ball(p, alpha), f);
  return finish(primal, dual, viol, u.size());
}

GapReport huber_gap(const GridImage& u, const DualField& p, const GridImage& f, double alpha,
                    double lambda) {
  check_shapes(u, p, f);
  if (!(alpha > 0.0) || !(lambda > 0.0))
    throw ContractViolation("huber_gap: alpha and lambda must be positive");
  const double primal =
      fidelity(u, f) + regularizer(u, [&](double q) { return huber_value(q, alpha, lambda); });
  const double viol = violation(p, alpha);
  if (viol > 1e-9 * alpha) return finish(primal, kInf, viol, u.size());
  const DualField pc = project_inf_ball(p, alpha);
  const double pp = dot(pc.data(), pc.data());
  const double dual = dual_fidelity(pc, f) + 0.5 * lambda * pp;
  return finish(primal, dual, viol, u.size());
}

double SaddleProblem::lagrangian(std::span<const double> x, std::span<const double> y) const {
  const Vec kx = K(x);
  return dot(kx, y) + f_value(x) - g_value(y);
}

bool check_adjoint(const LinearOperator& op, int samples, double tol, std::uint64_t seed) {
  SeededRng rng(seed);
  Vec x(op.cols), y(op.rows);
  for (int s = 0; s < samples; ++s) {
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    const double lhs = dot(op(x), y), rhs = dot(x, op.transpose(y));
    if (std::abs(lhs - rhs) > tol * norm2(x) * norm2(y)) return false;
  }
  return true;
}

namespace {

void require_nonempty(const PointSet& x0, const PointSet& y0) {
  if (x0.empty() || y0.empty()) throw ContractViolation("restricted gap: empty point set");
}

// F(x) + sup_{y' in Y0} <Kx, y'> - G(y')
double primal_part(const SaddleProblem& pr, std::span<const double> x, const PointSet& y0) {
  const Vec kx = pr.K(x);
  double best = -kInf;
  for (const auto& yp : y0) best = std::max(best, dot(kx, yp) - pr.g_value(yp));
  return pr.f_value(x) + best;
}

// G(y) + sup_{x' in X0} -<K^*y, x'> - F(x')
double dual_part(const SaddleProblem& pr, std::span<const double> y, const PointSet& x0) {
  const Vec kty = pr.K.transpose(y);
  double best = -kInf;
  for (const auto& xp : x0) best = std::max(best, -dot(kty, xp) - pr.f_value(xp));
  return pr.g_value(y) + best;
}

}  // namespace

double restricted_gap(const SaddleProblem& pr, std::span<const double> x, std::span<const double> y,
                      const PointSet& x0, const PointSet& y0) {
  require_nonempty(x0, y0);
  return primal_part(pr, x, y0) + dual_part(pr, y, x0);
}

RestrictedErrors restricted_errors(const SaddleProblem& pr, std::span<const double> x,
                                   std::span<const double> y, const PointSet& x0,
                                   const PointSet& y0, std::span<const double> xs,
                                   std::span<const double> ys) {
  require_nonempty(x0, y0);
  RestrictedErrors e;
  e.primal = primal_part(pr, x, y0) - primal_part(pr, xs, y0);
  e.dual = dual_part(pr, y, x0) - dual_part(pr, ys, x0);
  return e;
}

}  // namespace drsplit
