#include "drsplit/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "drsplit/errors.hpp"

namespace drsplit {
namespace {

// One iteration of the common template
//   x+ = proxF(xbar, sigma), y+ = proxG(ybar, tau),
//   b  = (ax x+ - sx xbar) - sb K^*(ay y+ - ybar),
//   d  = solve or precondition,
//   xbar+ = mx (xbar - rx x+) + d,  ybar+ = y+ + ty K d.
struct Coefficients {
  double sigma, tau;
  double ax, sx, sb, ay;
  double mx, rx, ty;
};

Coefficients dr_coefficients(double sigma, double tau) {
  return {sigma, tau, 2.0, 1.0, sigma, 2.0, 1.0, 1.0, tau};
}

Coefficients adr_coefficients(const StepSchedule& s) {
  const double th = s.theta;
  return {s.sigma, s.tau, 1.0 + th, th, s.sigma, 1.0 + th, th, 1.0, s.tau * s.inv_theta};
}

Coefficients adrsc_coefficients(double sigma, double tau, double theta) {
  const double a = (1.0 + theta) / theta;
  return {sigma, tau, a, 1.0, theta * sigma, a, 1.0, 1.0 / theta, theta * tau};
}

template <class DUpdate>
void generic_step(IterateState& st, const SaddleProblem& pr, const Coefficients& c,
                  DUpdate&& update_d) {
  const std::size_t n = pr.primal_dim, m = pr.dual_dim;
  if (st.xbar.size() != n || st.ybar.size() != m)
    throw ContractViolation("step: state does not match the problem dimensions");
  st.x.resize(n);
  st.y.resize(m);
  if (st.d.size() != n) st.d = st.xbar;
  pr.prox_f(st.xbar, c.sigma, st.x);
  pr.prox_g(st.ybar, c.tau, st.y);

  Vec v(m), kv(n), b(n);
  for (std::size_t i = 0; i < m; ++i) v[i] = c.ay * st.y[i] - st.ybar[i];
  pr.K.adjoint(v, kv);
  for (std::size_t i = 0; i < n; ++i) b[i] = (c.ax * st.x[i] - c.sx * st.xbar[i]) - c.sb * kv[i];

  update_d(st.d, b);

  Vec kd(m);
  pr.K.apply(st.d, kd);
  for (std::size_t i = 0; i < n; ++i) st.xbar[i] = c.mx * (st.xbar[i] - c.rx * st.x[i]) + st.d[i];
  for (std::size_t i = 0; i < m; ++i) st.ybar[i] = st.y[i] + c.ty * kd[i];
  ++st.k;

  if (!all_finite(st.x) || !all_finite(st.y) || !all_finite(st.xbar) || !all_finite(st.ybar) ||
      !all_finite(st.d))
    throw DivergenceError("nonfinite iterate", st.k);
}

auto exact_update(const EllipticSolver& e) {
  return [&e](Vec& d, const Vec& b) { e.solve(b, d); };
}

auto precond_update(const SplitPreconditioner& m) {
  return [&m](Vec& d, const Vec& b) { m.update(d, b); };
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dr: return "dr";
    case Algorithm::pdr: return "pdr";
    case Algorithm::adr: return "adr";
    case Algorithm::padr: return "padr";
    case Algorithm::adrsc: return "adrsc";
    case Algorithm::padrsc: return "padrsc";
  }
  return "dr";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::dr, Algorithm::pdr, Algorithm::adr, Algorithm::padr,
                      Algorithm::adrsc, Algorithm::padrsc})
    if (to_string(a) == name) return a;
  throw ConfigError("unknown algorithm '" + name + "'");
}

bool is_preconditioned(Algorithm a) {
  return a == Algorithm::pdr || a == Algorithm::padr || a == Algorithm::padrsc;
}

void ErgodicAccumulator::add(std::span<const double> x, double weight) {
  if (!(weight > 0.0)) throw ContractViolation("ergodic_update: weight must be positive");
  if (mean_.empty() && total_ == 0.0) mean_.assign(x.size(), 0.0);
  if (x.size() != mean_.size()) throw ContractViolation("ergodic_update: dimension mismatch");
  total_ += weight;
  const double t = weight / total_;
  for (std::size_t i = 0; i < x.size(); ++i) mean_[i] += t * (x[i] - mean_[i]);
}

void ergodic_update(ErgodicAccumulator& acc, std::span<const double> x, double weight) {
  acc.add(x, weight);
}

IterateState IterateState::initial(std::span<const double> xbar0, std::span<const double> ybar0) {
  IterateState st;
  st.xbar.assign(xbar0.begin(), xbar0.end());
  st.ybar.assign(ybar0.begin(), ybar0.end());
  st.x = st.xbar;
  st.y = st.ybar;
  st.d = st.xbar;
  st.erg_x = ErgodicAccumulator(st.x.size());
  st.erg_y = ErgodicAccumulator(st.y.size());
  return st;
}

IterateState IterateState::initial(const SaddleProblem& pr) {
  const Vec x0 = pr.initial_x.size() == pr.primal_dim ? pr.initial_x : Vec(pr.primal_dim, 0.0);
  const Vec y0 = pr.initial_y.size() == pr.dual_dim ? pr.initial_y : Vec(pr.dual_dim, 0.0);
  return initial(x0, y0);
}

StepSchedule StepSchedule::start(double sigma0, double tau0, double gamma) {
  if (!(sigma0 > 0.0) || !(tau0 > 0.0)) throw ContractViolation("schedule: steps must be positive");
  if (!(gamma >= 0.0)) throw ContractViolation("schedule: gamma must be nonnegative");
  StepSchedule s;
  s.sigma0 = s.sigma = sigma0;
  s.tau0 = s.tau = tau0;
  s.gamma = gamma;
  s.inv_theta = std::sqrt(1.0 + sigma0 * gamma);
  s.theta = 1.0 / s.inv_theta;
  return s;
}

void schedule_update(StepSchedule& s) {
  s.lambda_sum += s.lambda;
  s.lambda *= s.inv_theta;
  s.sigma *= s.theta;
  s.tau *= s.inv_theta;
  s.inv_theta = std::sqrt(1.0 + s.sigma * s.gamma);
  s.theta = 1.0 / s.inv_theta;
  ++s.k;
}

double lambda_lower_bound(double sigma0, double gamma, long k) {
  const double sg = sigma0 * gamma;
  return 1.0 + static_cast<double>(k) * sg / (std::sqrt(1.0 + sg) + 1.0);
}

double lambda_upper_bound(double sigma0, double gamma, long k) {
  return 1.0 + static_cast<double>(k) * sigma0 * gamma / 2.0;
}

double nu_upper_bound(double sigma0, double gamma, long k) {
  const double kk = static_cast<double>(k);
  const double sg = sigma0 * gamma;
  return 1.0 / (kk + (kk - 1.0) * kk * sg / (2.0 * (std::sqrt(1.0 + sg) + 1.0)));
}

void dr_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau,
             const EllipticSolver& elliptic) {
  generic_step(st, pr, dr_coefficients(sigma, tau), exact_update(elliptic));
}

void pdr_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau,
              const SplitPreconditioner& m) {
  generic_step(st, pr, dr_coefficients(sigma, tau), precond_update(m));
}

void adr_step(IterateState& st, StepSchedule& s, const SaddleProblem& pr,
              const EllipticSolver& elliptic) {
  generic_step(st, pr, adr_coefficients(s), exact_update(elliptic));
  schedule_update(s);
}

void padr_step(IterateState& st, StepSchedule& s, const SaddleProblem& pr,
               const SplitPreconditioner& m) {
  generic_step(st, pr, adr_coefficients(s), precond_update(m));
  schedule_update(s);
}

void adrsc_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau, double theta,
                const EllipticSolver& elliptic) {
  generic_step(st, pr, adrsc_coefficients(sigma, tau, theta), exact_update(elliptic));
}

void padrsc_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau, double theta,
                 const SplitPreconditioner& m) {
  generic_step(st, pr, adrsc_coefficients(sigma, tau, theta), precond_update(m));
}

double adr_gamma_bound(double gamma1, double sigma0, double tau0, double L) {
  return 2.0 * gamma1 / (1.0 + sigma0 * tau0 * L * L);
}

double padr_gamma_bound(double gamma1, double norm_m) { return 2.0 * gamma1 / norm_m; }

double adrsc_gamma_bound(double gamma1, double sigma, double tau, double L) {
  return 2.0 * gamma1 / (1.0 + (1.0 + 2.0 * sigma * gamma1) * sigma * tau * L * L);
}

double padrsc_gamma_bound(double gamma1, double sigma, double theta, double norm_m) {
  return 2.0 * gamma1 / (1.0 + (1.0 + 2.0 * sigma * gamma1) * (norm_m - 1.0) / (theta * theta));
}

AdrscParams adrsc_params_heuristic(double gamma1, double gamma2, double L) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(L > 0.0))
    throw ContractViolation("adrsc_params_heuristic: moduli and L must be positive");
  AdrscParams p;
  p.sigma = std::sqrt(gamma2 / (gamma1 * L * L));
  p.tau = std::sqrt(gamma1 / (gamma2 * L * L));
  const double den = L + std::sqrt(gamma1 * gamma2);
  p.gamma = gamma1 * L / den;
  p.gamma_prime = gamma2 * L / den;
  return p;
}

SplitPreconditioner make_preconditioner(const SaddleProblem& pr, const PreconditionerSpec& spec,
                                        double c, bool strict) {
  if (spec.family == PreconditionerSpec::Family::exact) {
    if (!pr.make_elliptic) throw ConfigError("problem provides no exact solver");
    SystemOperator t;
    if (pr.on_grid()) {
      t = StencilData(pr.width, pr.height, c).system();
    } else {
      t.dim = pr.primal_dim;
      auto k = pr.K;
      t.apply = [k, c](std::span<const double> u, std::span<double> out) {
        const Vec ku = k(u);
        const Vec kku = k.transpose(ku);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] + c * kku[i];
      };
      t.norm_bound = 1.0 + c * pr.normK * pr.normK;
      t.lower_bound = 1.0;
      t.c = c;
    }
    return build_exact(t, pr.make_elliptic(c));
  }
  if (!pr.on_grid()) throw ConfigError("stencil preconditioners need a grid problem");
  return build_preconditioner(spec, StencilData(pr.width, pr.height, c), strict);
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void admissible(bool ok, bool strict, const std::string& msg, ResolvedParams& out) {
  if (ok) return;
  if (strict) throw ConfigError(msg);
  out.warnings.push_back("permissive: " + msg);
}

}  // namespace

ResolvedParams resolve_params(const SaddleProblem& pr, const RunConfig& cfg) {
  require(pr.prox_f && pr.prox_g && pr.K.apply && pr.K.adjoint, "problem is incomplete");
  require(cfg.sigma0 > 0.0 && std::isfinite(cfg.sigma0), "sigma must be positive");
  require(cfg.max_iter >= 0, "max_iter must be nonnegative");
  require(cfg.log_every >= 1, "log_every must be at least 1");
  const double L = pr.normK;
  ResolvedParams out;
  out.sigma = cfg.sigma0;

  switch (cfg.algorithm) {
    case Algorithm::dr:
    case Algorithm::pdr: {
      out.tau = cfg.tau0.value_or(15.0 / out.sigma);
      require(out.tau > 0.0, "tau must be positive");
      out.c = out.sigma * out.tau;
      if (cfg.gamma) out.warnings.push_back("gamma ignored by " + to_string(cfg.algorithm));
      break;
    }
    case Algorithm::adr:
    case Algorithm::padr: {
      require(pr.gamma1 > 0.0, to_string(cfg.algorithm) + " needs a strongly convex F (gamma1 > 0)");
      out.tau = cfg.tau0.value_or(15.0 / out.sigma);
      require(out.tau > 0.0, "tau must be positive");
      out.c = out.sigma * out.tau;
      if (cfg.algorithm == Algorithm::adr) {
        const double bound = adr_gamma_bound(pr.gamma1, out.sigma, out.tau, L);
        out.gamma = cfg.gamma.value_or(bound / 2.0);
        require(out.gamma > 0.0 && out.gamma < bound,
                "adr: gamma must satisfy 0 < gamma < " + fmt(bound));
      } else {
        const auto m = make_preconditioner(pr, cfg.precond, out.c, cfg.strict);
        out.norm_m = m.norm_estimate();
        const double bound = padr_gamma_bound(pr.gamma1, out.norm_m);
        out.gamma = cfg.gamma.value_or(bound);
        require(out.gamma > 0.0, "padr: gamma must be positive");
        admissible(out.gamma <= bound, cfg.strict,
                   "padr: gamma exceeds 2 gamma1 / |M| = " + fmt(bound), out);
      }
      out.theta = 1.0 / std::sqrt(1.0 + out.sigma * out.gamma);
      break;
    }
    case Algorithm::adrsc:
    case Algorithm::padrsc: {
      require(pr.gamma1 > 0.0 && pr.gamma2 > 0.0,
              to_string(cfg.algorithm) + " needs gamma1 > 0 and gamma2 > 0");
      out.tau = cfg.tau0.value_or(out.sigma * pr.gamma1 / pr.gamma2);
      require(out.tau > 0.0, "tau must be positive");
      const double a = out.sigma * pr.gamma1, b = out.tau * pr.gamma2;
      require(std::abs(a - b) <= 1e-12 * std::max(a, b),
              "step sizes must satisfy sigma gamma1 = tau gamma2");
      if (cfg.algorithm == Algorithm::adrsc) {
        const double bound = adrsc_gamma_bound(pr.gamma1, out.sigma, out.tau, L);
        out.gamma = cfg.gamma.value_or(bound);
        require(out.gamma >= 0.0 && out.gamma <= bound,
                "adrsc: gamma must satisfy 0 <= gamma <= " + fmt(bound));
        out.theta = 1.0 / (1.0 + out.sigma * out.gamma);
      } else {
        if (cfg.gamma) {
          out.gamma = *cfg.gamma;
          require(out.gamma >= 0.0, "padrsc: gamma must be nonnegative");
          out.theta = 1.0 / (1.0 + out.sigma * out.gamma);
        } else {
          const bool monotone = !(cfg.precond.family == PreconditionerSpec::Family::ssor &&
                                  cfg.precond.value.value_or(1.0) != 1.0);
          if (!monotone)
            throw ConfigError("padrsc: SSOR with omega != 1 is not theta-norm-monotone; pass --gamma");
          const auto spec = cfg.precond;
          const bool strict = cfg.strict;
          const NormModel model = family_norm_model(
              out.sigma, out.tau,
              [&pr, spec, strict](double c) { return make_preconditioner(pr, spec, c, strict); });
          const auto fp = gamma_fixed_point(out.sigma, pr.gamma1, model, cfg.gamma_rounds);
          out.gamma = fp.gamma;
          out.theta = fp.theta;
        }
        const double c = out.theta * out.theta * out.sigma * out.tau;
        const auto m = make_preconditioner(pr, cfg.precond, c, cfg.strict);
        out.norm_m = m.norm_estimate();
        const double bound = padrsc_gamma_bound(pr.gamma1, out.sigma, out.theta, out.norm_m);
        admissible(out.gamma <= bound * (1.0 + 1e-12), cfg.strict,
                   "padrsc: gamma exceeds the admissible bound " + fmt(bound), out);
      }
      out.c = out.theta * out.theta * out.sigma * out.tau;
      break;
    }
  }
  return out;
}

RunResult run(const SaddleProblem& pr, const RunConfig& cfg, const RunCallbacks& cb) {
  using clock = std::chrono::steady_clock;
  RunResult res;
  res.params = resolve_params(pr, cfg);
  const ResolvedParams& p = res.params;
  const Algorithm alg = cfg.algorithm;

  std::optional<EllipticSolver> elliptic;
  std::optional<SplitPreconditioner> precond;
  if (is_preconditioned(alg)) {
    precond = make_preconditioner(pr, cfg.precond, p.c, cfg.strict);
    for (const auto& w : precond->warnings()) res.params.warnings.push_back(w);
  } else {
    if (!pr.make_elliptic) throw ConfigError("problem provides no exact solver");
    elliptic = pr.make_elliptic(p.c);
  }

  IterateState& st = res.state;
  st = IterateState::initial(pr);
  StepSchedule& sched = res.schedule;
  const bool accelerated = alg == Algorithm::adr || alg == Algorithm::padr;
  sched = StepSchedule::start(p.sigma, p.tau, accelerated ? p.gamma : 0.0);

  const double pixels = static_cast<double>(pr.primal_dim);
  double elapsed = 0.0;
  for (long k = 0; k < cfg.max_iter; ++k) {
    const auto t0 = clock::now();
    const double weight = accelerated ? sched.lambda : 1.0;
    switch (alg) {
      case Algorithm::dr: dr_step(st, pr, p.sigma, p.tau, *elliptic); break;
      case Algorithm::pdr: pdr_step(st, pr, p.sigma, p.tau, *precond); break;
      case Algorithm::adr: adr_step(st, sched, pr, *elliptic); break;
      case Algorithm::padr: padr_step(st, sched, pr, *precond); break;
      case Algorithm::adrsc: adrsc_step(st, pr, p.sigma, p.tau, p.theta, *elliptic); break;
      case Algorithm::padrsc: padrsc_step(st, pr, p.sigma, p.tau, p.theta, *precond); break;
    }
    ergodic_update(st.erg_x, st.x, weight);
    ergodic_update(st.erg_y, st.y, weight);
    elapsed += std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    res.iterations = st.k;
    if (cb.on_step) cb.on_step(st, sched);

    const long it = st.k;
    if (!pr.gap || !(it == 1 || it % cfg.log_every == 0 || it == cfg.max_iter)) continue;
    const GapReport g = pr.gap(st.x, st.y);
    LogRecord rec;
    rec.iter = it;
    rec.gap_per_pixel = g.gap / pixels;
    rec.primal_energy = g.primal_energy;
    rec.dual_energy = g.dual_energy;
    rec.elapsed_ms = elapsed;
    if (cfg.log_ergodic) rec.ergodic_gap_per_pixel = pr.gap(st.erg_x.mean(), st.erg_y.mean()).gap / pixels;
    res.history.push_back(rec);
    if (cb.on_log) cb.on_log(rec);
    if (rec.gap_per_pixel <= cfg.gap_tol_per_pixel) {
      res.converged = true;
      break;
    }
  }
  res.elapsed_ms = elapsed;
  return res;
}

}  // namespace drsplit
