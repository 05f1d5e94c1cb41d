#include "drsplit/precond.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>

#include "drsplit/errors.hpp"
#include "drsplit/linops.hpp"
#include "drsplit/random.hpp"

namespace drsplit {
namespace {

std::size_t degree(std::size_t i, std::size_t j, std::size_t w, std::size_t h) {
  return (i > 0) + (i + 1 < w) + (j > 0) + (j + 1 < h);
}

double neighbour_sum(std::span<const double> x, std::size_t i, std::size_t j, std::size_t w,
                     std::size_t h) {
  const std::size_t p = j * w + i;
  double s = 0.0;
  if (i > 0) s += x[p - 1];
  if (i + 1 < w) s += x[p + 1];
  if (j > 0) s += x[p - w];
  if (j + 1 < h) s += x[p + w];
  return s;
}

// Pixels of one colour: parity 0 is red.
template <class F>
void for_colour(const StencilData& s, int parity, F&& f) {
  for (std::size_t j = 0; j < s.height; ++j)
    for (std::size_t i = (j + parity) % 2; i < s.width; i += 2) f(i, j, j * s.width + i);
}

// Solves (Dw - E) x = r, red pixels first. r and x may alias.
void sweep_forward(const StencilData& s, const Vec& dw, std::span<const double> r,
                   std::span<double> x) {
  const double c = s.c;
  for_colour(s, 0, [&](std::size_t, std::size_t, std::size_t p) { x[p] = r[p] / dw[p]; });
  for_colour(s, 1, [&](std::size_t i, std::size_t j, std::size_t p) {
    x[p] = (r[p] + c * neighbour_sum(x, i, j, s.width, s.height)) / dw[p];
  });
}

// Solves (Dw - E^*) x = r, black pixels first. r and x may alias.
void sweep_backward(const StencilData& s, const Vec& dw, std::span<const double> r,
                    std::span<double> x) {
  const double c = s.c;
  for_colour(s, 1, [&](std::size_t, std::size_t, std::size_t p) { x[p] = r[p] / dw[p]; });
  for_colour(s, 0, [&](std::size_t i, std::size_t j, std::size_t p) {
    x[p] = (r[p] + c * neighbour_sum(x, i, j, s.width, s.height)) / dw[p];
  });
}

void check_dim(std::size_t n, std::span<const double> a, const char* what) {
  if (a.size() != n) throw ContractViolation(std::string(what) + ": dimension mismatch");
}

void residual(const SystemOperator& t, std::span<const double> d, std::span<const double> b,
              std::span<double> r) {
  t.apply(d, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

SplitPreconditioner build_ssor_kind(const StencilData& s, double omega, PrecondKind kind) {
  auto dw = std::make_shared<Vec>(s.diagonal);
  for (auto& v : *dw) v /= omega;
  auto mid = std::make_shared<Vec>(s.diagonal);
  const double scale = (2.0 - omega) / omega;
  for (auto& v : *mid) v *= scale;
  auto st = std::make_shared<const StencilData>(s);
  ApplyFn inv = [st, dw, mid](std::span<const double> r, std::span<double> out) {
    sweep_forward(*st, *dw, r, out);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] *= (*mid)[p];
    sweep_backward(*st, *dw, out, out);
  };
  PrecondParams params;
  params.omega = omega;
  return SplitPreconditioner(kind, params, s.system(), std::move(inv),
                             s.norm_bound() + ssor_excess_bound(s, omega), 1.0);
}

}  // namespace

StencilData::StencilData(std::size_t w, std::size_t h, double c_)
    : width(w), height(h), c(c_), diagonal(w * h), offdiag(-c_), red(w * h) {
  if (w == 0 || h == 0) throw ContractViolation("StencilData: empty grid");
  if (!(c_ >= 0.0) || !std::isfinite(c_))
    throw ContractViolation("StencilData: c must be finite and nonnegative");
  for (std::size_t j = 0; j < h; ++j)
    for (std::size_t i = 0; i < w; ++i) {
      const std::size_t p = j * w + i;
      diagonal[p] = 1.0 + c * static_cast<double>(degree(i, j, w, h));
      red[p] = (i + j) % 2 == 0;
    }
}

double StencilData::max_diagonal() const { return *std::max_element(diagonal.begin(), diagonal.end()); }
double StencilData::min_diagonal() const { return *std::min_element(diagonal.begin(), diagonal.end()); }

double StencilData::norm_bound() const {
  // row p: (1 + c deg) + c deg
  double m = 0.0;
  for (double d : diagonal) m = std::max(m, 2.0 * d - 1.0);
  return m;
}

double StencilData::offdiag_bound() const { return max_diagonal() - 1.0; }

SystemOperator StencilData::system() const {
  SystemOperator t;
  t.dim = size();
  const std::size_t w = width, h = height;
  const double cc = c;
  t.apply = [w, h, cc](std::span<const double> u, std::span<double> out) {
    normal_apply(w, h, u, cc, out);
  };
  t.norm_bound = norm_bound();
  t.lower_bound = 1.0;
  t.c = c;
  return t;
}

SystemOperator identity_system(std::size_t n) {
  SystemOperator t;
  t.dim = n;
  t.apply = [](std::span<const double> u, std::span<double> out) {
    std::copy(u.begin(), u.end(), out.begin());
  };
  t.norm_bound = 1.0;
  t.lower_bound = 1.0;
  return t;
}

SystemOperator gradient_normal_system(std::size_t w, std::size_t h, double c) {
  if (!(c >= 0.0)) throw ContractViolation("gradient_normal_system: c must be nonnegative");
  SystemOperator t;
  t.dim = w * h;
  t.apply = [w, h, c](std::span<const double> u, std::span<double> out) {
    normal_apply(w, h, u, c, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= u[i];
  };
  t.norm_bound = 8.0 * c;
  t.lower_bound = 0.0;
  return t;
}

std::string to_string(PrecondKind kind) {
  switch (kind) {
    case PrecondKind::exact: return "exact";
    case PrecondKind::richardson: return "richardson";
    case PrecondKind::damped_jacobi: return "damped_jacobi";
    case PrecondKind::sym_gauss_seidel_rb: return "sym_gauss_seidel_rb";
    case PrecondKind::ssor: return "ssor";
    case PrecondKind::nfold: return "nfold";
    case PrecondKind::symmetrized: return "symmetrized";
    case PrecondKind::additive: return "additive";
  }
  return "unknown";
}

SplitPreconditioner::SplitPreconditioner(PrecondKind kind, PrecondParams params,
                                         SystemOperator system, ApplyFn apply_inverse,
                                         double norm_estimate, double lower_estimate,
                                         UpdateFn update)
    : kind_(kind), params_(params), system_(std::move(system)), inverse_(std::move(apply_inverse)),
      update_(std::move(update)), norm_estimate_(norm_estimate), lower_estimate_(lower_estimate) {
  if (!inverse_) throw ContractViolation("SplitPreconditioner: missing inverse");
  if (!system_.apply) throw ContractViolation("SplitPreconditioner: missing system operator");
}

void SplitPreconditioner::apply_inverse(std::span<const double> r, std::span<double> out) const {
  check_dim(dim(), r, "apply_inverse");
  check_dim(dim(), out, "apply_inverse");
  inverse_(r, out);
}

void SplitPreconditioner::update(std::span<double> d, std::span<const double> b) const {
  check_dim(dim(), d, "update");
  check_dim(dim(), b, "update");
  if (update_) {
    update_(d, b);
    return;
  }
  Vec r(dim()), corr(dim());
  residual(system_, d, b, r);
  inverse_(r, corr);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += corr[i];
}

GridImage precond_step(const GridImage& d, const GridImage& b, const SplitPreconditioner& m,
                       double c) {
  if (!d.same_shape(b)) throw ContractViolation("precond_step: d and b differ in shape");
  if (!std::isnan(m.system().c) && m.system().c != c)
    throw ContractViolation("precond_step: preconditioner built for a different c");
  GridImage out = d;
  m.update(out.values(), b.values());
  return out;
}

SplitPreconditioner build_exact(const SystemOperator& system, const EllipticSolver& solver) {
  if (solver.dim() != system.dim) throw ContractViolation("build_exact: dimension mismatch");
  ApplyFn inv = [solver](std::span<const double> r, std::span<double> out) { solver.solve(r, out); };
  SplitPreconditioner::UpdateFn upd = [solver](std::span<double> d, std::span<const double> b) {
    Vec tmp(d.size());
    solver.solve(b, tmp);
    std::copy(tmp.begin(), tmp.end(), d.begin());
  };
  return SplitPreconditioner(PrecondKind::exact, {}, system, std::move(inv), system.norm_bound,
                             system.lower_bound, std::move(upd));
}

SplitPreconditioner build_exact(const StencilData& s) {
  return build_exact(s.system(), EllipticSolver::dct(s.width, s.height, s.c));
}

SplitPreconditioner build_richardson(const StencilData& s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ContractViolation("build_richardson: lambda must be positive");
  ApplyFn inv = [lambda](std::span<const double> r, std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] / lambda;
  };
  PrecondParams params;
  params.lambda = lambda;
  SplitPreconditioner m(PrecondKind::richardson, params, s.system(), std::move(inv), lambda, lambda);
  if (lambda < s.norm_bound())
    m.add_warning("richardson: lambda below the bound on |T|, feasibility not guaranteed");
  return m;
}

SplitPreconditioner build_damped_jacobi(const StencilData& s, double lambda, bool strict) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ContractViolation("build_damped_jacobi: lambda must be nonnegative");
  const bool below = lambda < s.offdiag_bound();
  if (below && strict)
    throw ConfigError("build_damped_jacobi: lambda below the bound on lambda_max(T - D)");
  auto md = std::make_shared<Vec>(s.diagonal);
  for (auto& v : *md) v *= lambda + 1.0;
  ApplyFn inv = [md](std::span<const double> r, std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] / (*md)[i];
  };
  PrecondParams params;
  params.lambda = lambda;
  SplitPreconditioner m(PrecondKind::damped_jacobi, params, s.system(), std::move(inv),
                        (lambda + 1.0) * s.max_diagonal(), (lambda + 1.0) * s.min_diagonal());
  if (below) m.add_warning("damped_jacobi: lambda below the bound on lambda_max(T - D)");
  return m;
}

SplitPreconditioner build_sgs_redblack(const StencilData& s) {
  return build_ssor_kind(s, 1.0, PrecondKind::sym_gauss_seidel_rb);
}

SplitPreconditioner build_ssor(const StencilData& s, double omega) {
  if (!(omega > 0.0 && omega < 2.0)) throw ContractViolation("build_ssor: omega must lie in (0, 2)");
  return build_ssor_kind(s, omega, PrecondKind::ssor);
}

double ssor_excess_bound(const StencilData& s, double omega) {
  if (!(omega > 0.0 && omega < 2.0))
    throw ContractViolation("ssor_excess_bound: omega must lie in (0, 2)");
  const double a = std::abs((1.0 - omega) / omega);
  const std::size_t w = s.width, h = s.height;
  // B = a D^{1/2} + D^{-1/2} E^*; E^* couples red rows to black columns.
  double row_max = 0.0, col_max = 0.0;
  for (std::size_t j = 0; j < h; ++j)
    for (std::size_t i = 0; i < w; ++i) {
      const std::size_t p = j * w + i;
      const double sd = std::sqrt(s.diagonal[p]);
      double row = a * sd, col = a * sd;
      if (s.red[p]) {
        row += s.c * static_cast<double>(degree(i, j, w, h)) / sd;
      } else {
        if (i > 0) col += s.c / std::sqrt(s.diagonal[p - 1]);
        if (i + 1 < w) col += s.c / std::sqrt(s.diagonal[p + 1]);
        if (j > 0) col += s.c / std::sqrt(s.diagonal[p - w]);
        if (j + 1 < h) col += s.c / std::sqrt(s.diagonal[p + w]);
      }
      row_max = std::max(row_max, row);
      col_max = std::max(col_max, col);
    }
  return omega / (2.0 - omega) * row_max * col_max;
}

double sgs_excess_model(double c) { return 4.0 * c * c / (1.0 + 4.0 * c); }

SplitPreconditioner combine_nfold(const SplitPreconditioner& m, int n) {
  if (n < 1) throw ContractViolation("combine_nfold: n must be at least 1");
  auto base = std::make_shared<const SplitPreconditioner>(m);
  SplitPreconditioner::UpdateFn upd = [base, n](std::span<double> d, std::span<const double> b) {
    for (int i = 0; i < n; ++i) base->update(d, b);
  };
  ApplyFn inv = [upd](std::span<const double> r, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    upd(out, r);
  };
  PrecondParams params = m.params();
  params.n = n;
  SplitPreconditioner out(PrecondKind::nfold, params, m.system(), std::move(inv), m.norm_estimate(),
                          m.system().lower_bound, std::move(upd));
  for (const auto& w : m.warnings()) out.add_warning(w);
  return out;
}

OneSidedSweep gauss_seidel_sweep(const StencilData& s) {
  auto st = std::make_shared<const StencilData>(s);
  OneSidedSweep sw;
  sw.dim = s.size();
  sw.inverse = [st](std::span<const double> r, std::span<double> out) {
    sweep_forward(*st, st->diagonal, r, out);
  };
  sw.inverse_adjoint = [st](std::span<const double> r, std::span<double> out) {
    sweep_backward(*st, st->diagonal, r, out);
  };
  sw.induced_norm_bound = s.norm_bound() + ssor_excess_bound(s, 1.0);
  return sw;
}

OneSidedSweep jacobi_sweep(const StencilData& s) {
  auto diag = std::make_shared<const Vec>(s.diagonal);
  OneSidedSweep sw;
  sw.dim = s.size();
  sw.inverse = [diag](std::span<const double> r, std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] / (*diag)[i];
  };
  sw.inverse_adjoint = sw.inverse;
  // M = D (2D - T)^{-1} D with 2D - T = I + c (Deg + Adj) >= I.
  sw.induced_norm_bound = s.max_diagonal() * s.max_diagonal();
  return sw;
}

SplitPreconditioner combine_symmetrized(const OneSidedSweep& sweep, const SystemOperator& system) {
  if (sweep.dim != system.dim) throw ContractViolation("combine_symmetrized: dimension mismatch");
  const std::size_t n = sweep.dim;
  SeededRng rng(0x5eed);
  Vec r(n), s(n), ar(n), as(n);
  for (int trial = 0; trial < 3; ++trial) {
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = rng.uniform(-1.0, 1.0);
      s[i] = rng.uniform(-1.0, 1.0);
    }
    sweep.inverse(r, ar);
    sweep.inverse_adjoint(s, as);
    const double lhs = dot(ar, s), rhs = dot(r, as);
    const double scale = norm2(ar) * norm2(s) + norm2(r) * norm2(as);
    if (std::abs(lhs - rhs) > 1e-10 * scale)
      throw ContractViolation("combine_symmetrized: sweeps are not adjoint to each other");
  }
  auto sw = std::make_shared<const OneSidedSweep>(sweep);
  auto t = std::make_shared<const SystemOperator>(system);
  SplitPreconditioner::UpdateFn upd = [sw, t](std::span<double> d, std::span<const double> b) {
    Vec res(d.size()), corr(d.size());
    residual(*t, d, b, res);
    sw->inverse(res, corr);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += corr[i];
    residual(*t, d, b, res);
    sw->inverse_adjoint(res, corr);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += corr[i];
  };
  ApplyFn inv = [upd](std::span<const double> r, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    upd(out, r);
  };
  return SplitPreconditioner(PrecondKind::symmetrized, {}, system, std::move(inv),
                             sweep.induced_norm_bound, system.lower_bound, std::move(upd));
}

SplitPreconditioner combine_additive(const SplitPreconditioner& m, const SystemOperator& t2) {
  if (t2.dim != m.dim()) throw ContractViolation("combine_additive: dimension mismatch");
  auto base = std::make_shared<const SplitPreconditioner>(m);
  auto t2p = std::make_shared<const SystemOperator>(t2);
  SplitPreconditioner::UpdateFn upd = [base, t2p](std::span<double> d, std::span<const double> b) {
    const std::size_t n = d.size();
    Vec t1d(n), t2d(n), r(n), half(n), corr(n);
    base->system().apply(d, t1d);
    t2p->apply(d, t2d);
    for (std::size_t i = 0; i < n; ++i) r[i] = (b[i] - t2d[i]) - t1d[i];
    base->apply_inverse(r, corr);
    for (std::size_t i = 0; i < n; ++i) half[i] = d[i] + corr[i];
    t2p->apply(half, t2d);
    for (std::size_t i = 0; i < n; ++i) r[i] = (b[i] - t2d[i]) - t1d[i];
    base->apply_inverse(r, corr);
    for (std::size_t i = 0; i < n; ++i) d[i] += corr[i];
  };
  ApplyFn inv = [upd](std::span<const double> r, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    upd(out, r);
  };

  SystemOperator total;
  total.dim = m.dim();
  total.apply = [base, t2p](std::span<const double> u, std::span<double> out) {
    Vec tmp(u.size());
    base->system().apply(u, out);
    t2p->apply(u, tmp);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
  };
  total.norm_bound = m.system().norm_bound + t2.norm_bound;
  total.lower_bound = m.system().lower_bound + t2.lower_bound;

  const double margin = m.lower_estimate() - t2.norm_bound;
  const double norm = margin > 0.0 ? m.norm_estimate() * m.norm_estimate() / margin
                                   : std::numeric_limits<double>::infinity();
  // M - T2 <= M, so M (M - T2)^{-1} M >= lower(M)^2 / |M|.
  const double lower = margin > 0.0 ? m.lower_estimate() * m.lower_estimate() / m.norm_estimate() : 0.0;
  SplitPreconditioner out(PrecondKind::additive, m.params(), total, std::move(inv), norm, lower,
                          std::move(upd));
  if (!(margin > 0.0))
    out.add_warning("additive: M - T2 not provably positive definite, feasibility not guaranteed");
  return out;
}

FeasibilityCertificate check_feasible(const DenseMatrix& m, const DenseMatrix& t, double tol) {
  if (m.rows() != m.cols() || t.rows() != t.cols() || m.rows() != t.rows())
    throw ContractViolation("check_feasible: matrices must be square and of equal size");
  if (static_cast<std::size_t>(m.rows()) > kDenseSizeGuard)
    throw SizeGuardError("check_feasible: matrix larger than the dense guard");
  FeasibilityCertificate cert;
  const DenseMatrix diff = m - t;
  const auto eig = symmetric_eigenvalues(diff);
  cert.min_eig_difference = eig.size() ? eig(0) : 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const auto& sv = svd.singularValues();
  cert.min_singular_value = sv.size() ? sv(sv.size() - 1) : 0.0;
  cert.symmetry_error = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double big = sv.size() ? sv(0) : 0.0;
  cert.feasible = cert.min_eig_difference >= -tol && cert.min_singular_value > 1e-12 * std::max(1.0, big) &&
                  cert.symmetry_error <= 1e-8 * std::max(1.0, big);
  return cert;
}

DenseMatrix materialize_preconditioner(const SplitPreconditioner& m) {
  LinearOperator op;
  op.rows = op.cols = m.dim();
  op.apply = [&m](std::span<const double> r, std::span<double> out) { m.apply_inverse(r, out); };
  op.adjoint = op.apply;
  const DenseMatrix minv = dense_materialize(op);
  return minv.partialPivLu().inverse();
}

DenseMatrix materialize_system(const SystemOperator& t) {
  LinearOperator op;
  op.rows = op.cols = t.dim;
  op.apply = t.apply;
  op.adjoint = t.apply;
  return dense_materialize(op);
}

std::optional<double> nfold_norm_bound(double norm_t, double norm_m_inv, double rho, int n) {
  if (!(rho >= 0.0 && rho < 1.0)) throw ContractViolation("nfold_norm_bound: rho must lie in [0, 1)");
  if (n < 1) throw ContractViolation("nfold_norm_bound: n must be at least 1");
  const double denom = 1.0 - norm_m_inv * std::pow(rho, n);
  if (!(denom > 0.0)) return std::nullopt;
  return norm_t / denom;
}

NormModel exact_norm_model(double sigma, double tau, double L) {
  NormModel m;
  m.system_norm = [=](double th) { return 1.0 + th * th * sigma * tau * L * L; };
  m.excess_norm = [](double) { return 0.0; };
  return m;
}

NormModel sgs_norm_model(double sigma, double tau, double L) {
  NormModel m;
  m.system_norm = [=](double th) { return 1.0 + th * th * sigma * tau * L * L; };
  m.excess_norm = [=](double th) { return sgs_excess_model(th * th * sigma * tau); };
  return m;
}

NormModel family_norm_model(double sigma, double tau,
                            std::function<SplitPreconditioner(double c)> build, bool theta_monotone) {
  NormModel m;
  m.system_norm = [=](double th) { return build(th * th * sigma * tau).system_norm_estimate(); };
  m.excess_norm = [=](double th) {
    const auto p = build(th * th * sigma * tau);
    return p.norm_estimate() - p.system_norm_estimate();
  };
  m.theta_monotone = theta_monotone;
  return m;
}

GammaFixedPoint gamma_fixed_point(double sigma, double gamma1, const NormModel& model, int rounds) {
  if (!model.theta_monotone)
    throw ContractViolation("gamma_fixed_point: norm model is not theta-norm-monotone");
  if (rounds < 1) throw ContractViolation("gamma_fixed_point: rounds must be at least 1");
  if (!(sigma > 0.0) || !(gamma1 > 0.0))
    throw ContractViolation("gamma_fixed_point: sigma and gamma1 must be positive");
  GammaFixedPoint out;
  double theta = 1.0;
  for (int r = 0; r < rounds; ++r) {
    const double norm_m = model.system_norm(theta) + model.excess_norm(theta);
    const double gamma =
        2.0 * gamma1 / (1.0 + (1.0 + 2.0 * sigma * gamma1) * (norm_m - 1.0) / (theta * theta));
    if (!out.gamma_history.empty() && gamma < out.gamma_history.back() * (1.0 - 1e-14))
      throw ContractViolation("gamma_fixed_point: gamma decreased, norm model not monotone");
    out.gamma_history.push_back(gamma);
    theta = 1.0 / (1.0 + sigma * gamma);
    out.gamma = gamma;
    out.theta = theta;
  }
  return out;
}

namespace {

double parse_number(const std::string& text, const std::string& whole) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ConfigError("preconditioner spec '" + whole + "': bad number '" + text + "'");
  return v;
}

int parse_count(const std::string& text, const std::string& whole) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || v < 1)
    throw ConfigError("preconditioner spec '" + whole + "': bad count '" + text + "'");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

PreconditionerSpec parse_preconditioner_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  PreconditionerSpec spec;
  const std::string& head = parts[0];
  if (head == "exact" && parts.size() == 1) {
    spec.family = PreconditionerSpec::Family::exact;
  } else if ((head == "richardson" || head == "jacobi") && parts.size() <= 2) {
    spec.family = head == "richardson" ? PreconditionerSpec::Family::richardson
                                       : PreconditionerSpec::Family::jacobi;
    if (parts.size() == 2) spec.value = parse_number(parts[1], text);
  } else if (head.rfind("gs", 0) == 0 && parts.size() == 1) {
    spec.family = PreconditionerSpec::Family::gs;
    spec.n = parse_count(head.substr(2), text);
  } else if (head == "ssor" && parts.size() == 3) {
    spec.family = PreconditionerSpec::Family::ssor;
    spec.value = parse_number(parts[1], text);
    spec.n = parse_count(parts[2], text);
  } else {
    throw ConfigError("unknown preconditioner spec '" + text + "'");
  }
  return spec;
}

std::string to_string(const PreconditionerSpec& spec) {
  switch (spec.family) {
    case PreconditionerSpec::Family::exact: return "exact";
    case PreconditionerSpec::Family::richardson:
      return spec.value ? "richardson:" + format_number(*spec.value) : "richardson";
    case PreconditionerSpec::Family::jacobi:
      return spec.value ? "jacobi:" + format_number(*spec.value) : "jacobi";
    case PreconditionerSpec::Family::gs: return "gs" + std::to_string(spec.n);
    case PreconditionerSpec::Family::ssor:
      return "ssor:" + format_number(spec.value.value_or(1.0)) + ":" + std::to_string(spec.n);
  }
  return "exact";
}

SplitPreconditioner build_preconditioner(const PreconditionerSpec& spec, const StencilData& s,
                                         bool strict) {
  switch (spec.family) {
    case PreconditionerSpec::Family::exact: return build_exact(s);
    case PreconditionerSpec::Family::richardson:
      return build_richardson(s, spec.value.value_or(s.norm_bound()));
    case PreconditionerSpec::Family::jacobi:
      return build_damped_jacobi(s, spec.value.value_or(s.offdiag_bound()), strict);
    case PreconditionerSpec::Family::gs: {
      auto m = build_sgs_redblack(s);
      return spec.n == 1 ? m : combine_nfold(m, spec.n);
    }
    case PreconditionerSpec::Family::ssor: {
      const double omega = spec.value.value_or(1.0);
      if (!(omega > 0.0 && omega < 2.0)) throw ConfigError("ssor: omega must lie in (0, 2)");
      auto m = build_ssor(s, omega);
      return spec.n == 1 ? m : combine_nfold(m, spec.n);
    }
  }
  throw ConfigError("unknown preconditioner family");
}

}  // namespace drsplit
