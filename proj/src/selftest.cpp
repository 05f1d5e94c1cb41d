#include "drsplit/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "drsplit/dense.hpp"
#include "drsplit/exactsolve.hpp"
#include "drsplit/linops.hpp"
#include "drsplit/precond.hpp"
#include "drsplit/problems.hpp"
#include "drsplit/random.hpp"
#include "drsplit/solvers.hpp"

namespace drsplit {
namespace {

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SelftestCheck adjointness(bool flip_div) {
  double worst = 0.0;
  for (std::size_t n : {4, 16}) {
    SeededRng rng(11 + n);
    for (int s = 0; s < 20; ++s) {
      GridImage u(n, n);
      DualField p(n, n);
      for (auto& v : u.values()) v = rng.uniform(-1.0, 1.0);
      for (auto& v : p.data()) v = rng.uniform(-1.0, 1.0);
      GridImage dv = div_apply(p);
      if (flip_div)
        for (auto& v : dv.values()) v = -v;
      const double r = std::abs(dot(grad_apply(u).data(), p.data()) + dot(u.values(), dv.values())) /
                       (norm2(u.values()) * norm2(p.data()));
      worst = std::max(worst, r);
    }
  }
  return {"adjointness of grad and div", worst <= 1e-10, fmt("max rel defect %.3g", worst)};
}

SelftestCheck operator_norm() {
  const double L = power_norm(gradient_operator(32, 32), 200, 1);
  return {"power iteration |grad| on 32x32", L > 2.7 && L * L <= 8.0 + 1e-9, fmt("L = %.12g", L)};
}

SelftestCheck elliptic_vs_dense() {
  double worst = 0.0;
  for (double c : {1.0, 15.0}) {
    SeededRng rng(5);
    GridImage b(8, 8);
    for (auto& v : b.values()) v = rng.uniform(-1.0, 1.0);
    const DctPlan plan(8, 8, c);
    const GridImage d = solve_elliptic(b, plan);
    const Vec ref = dense_solve(dense_materialize(normal_operator(8, 8, c)), b.values());
    worst = std::max(worst, max_abs_diff(d.values(), ref));
  }
  return {"DCT elliptic solve vs dense solve", worst <= 1e-10, fmt("max diff %.3g", worst)};
}

SelftestCheck eigenvalue_formula() {
  const DctPlan plan(4, 4, 2.5);
  Vec eig(plan.eigenvalues().begin(), plan.eigenvalues().end());
  std::sort(eig.begin(), eig.end());
  const auto ref = symmetric_eigenvalues(dense_materialize(normal_operator(4, 4, 2.5)));
  double worst = 0.0;
  for (std::size_t i = 0; i < eig.size(); ++i) worst = std::max(worst, std::abs(eig[i] - ref(i)));
  return {"DCT eigenvalues vs dense spectrum", worst <= 1e-10, fmt("max diff %.3g", worst)};
}

SelftestCheck feasibility() {
  double worst = 0.0;
  bool ok = true;
  for (double c : {1.0, 15.0}) {
    const StencilData s(6, 6, c);
    const DenseMatrix t = materialize_system(s.system());
    std::vector<SplitPreconditioner> all{
        build_richardson(s, s.norm_bound()),
        build_damped_jacobi(s, s.offdiag_bound()),
        build_sgs_redblack(s),
        build_ssor(s, 0.5),
        build_ssor(s, 1.5),
        combine_nfold(build_sgs_redblack(s), 2),
        combine_symmetrized(gauss_seidel_sweep(s), s.system()),
    };
    for (const auto& m : all) {
      const auto cert = check_feasible(materialize_preconditioner(m), t, 1e-9);
      ok = ok && cert.feasible;
      worst = std::min(worst, cert.min_eig_difference);
    }
  }
  return {"preconditioner feasibility on 6x6", ok, fmt("min eig(M - T) %.3g", worst)};
}

SelftestCheck fixed_points() {
  const SaddleProblem pr = build_scalar_quadratic(1.0, 1.0);
  const double xs = 0.5, ys = 0.5, sigma = 1.0, tau = 1.0;
  const Vec xb{xs - sigma * ys}, yb{ys + tau * xs};
  double drift = 0.0;
  {
    IterateState st = IterateState::initial(xb, yb);
    const auto e = pr.make_elliptic(sigma * tau);
    for (int k = 0; k < 10; ++k) dr_step(st, pr, sigma, tau, e);
    drift = std::max({drift, std::abs(st.xbar[0] - xb[0]), std::abs(st.ybar[0] - yb[0])});
  }
  {
    const double gamma = adrsc_gamma_bound(1.0, sigma, tau, 1.0);
    const double theta = 1.0 / (1.0 + sigma * gamma);
    IterateState st = IterateState::initial(xb, yb);
    const auto e = pr.make_elliptic(theta * theta * sigma * tau);
    for (int k = 0; k < 10; ++k) adrsc_step(st, pr, sigma, tau, theta, e);
    drift = std::max({drift, std::abs(st.xbar[0] - xb[0]), std::abs(st.ybar[0] - yb[0])});
  }
  return {"fixed points of DR and strongly convex variant", drift <= 1e-12, fmt("drift %.3g", drift)};
}

SelftestCheck schedule() {
  StepSchedule s = StepSchedule::start(1.0, 15.0, 0.5);
  bool ok = true;
  for (long k = 0; k <= 1000; ++k) {
    const double slack = 1e-12 * s.lambda;
    ok = ok && s.lambda >= lambda_lower_bound(1.0, 0.5, k) - slack &&
         s.lambda <= lambda_upper_bound(1.0, 0.5, k) + slack;
    if (k >= 1) ok = ok && s.nu() <= nu_upper_bound(1.0, 0.5, k) * (1.0 + 1e-12);
    ok = ok && std::abs(s.sigma * s.tau - 15.0) <= 1e-12 * 15.0;
    schedule_update(s);
  }
  return {"accelerated schedule bounds", ok, ""};
}

SelftestCheck constant_image() {
  const GridImage f(12, 9, 0.3);
  RunConfig rc;
  rc.algorithm = Algorithm::dr;
  rc.max_iter = 50;
  const RunResult r = run(build_rof(f, 0.5), rc);
  const bool ok = r.iterations == 1 && !r.history.empty() && r.history.back().gap_per_pixel == 0.0;
  return {"constant image is a saddle point", ok, fmt("iterations %.0f", static_cast<double>(r.iterations))};
}

SelftestCheck exact_degeneracy() {
  const GridImage f = add_gaussian_noise(synthetic_scene(8, 8), 0.1, 3);
  const SaddleProblem pr = build_rof(f, 0.5);
  IterateState a = IterateState::initial(pr), b = a;
  const double sigma = 1.0, tau = 15.0;
  const auto e = pr.make_elliptic(sigma * tau);
  const auto m = make_preconditioner(pr, PreconditionerSpec{}, sigma * tau, true);
  for (int k = 0; k < 20; ++k) {
    dr_step(a, pr, sigma, tau, e);
    pdr_step(b, pr, sigma, tau, m);
  }
  const double diff = std::max(max_abs_diff(a.xbar, b.xbar), max_abs_diff(a.ybar, b.ybar));
  return {"exact preconditioner reproduces DR", diff <= 1e-12, fmt("max diff %.3g", diff)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest_suite(const std::string& inject_fault) {
  const bool flip = inject_fault == "div-sign";
  std::vector<std::function<SelftestCheck()>> checks{
      [flip] { return adjointness(flip); }, operator_norm, elliptic_vs_dense, eigenvalue_formula,
      feasibility, fixed_points, schedule, constant_image, exact_degeneracy};
  std::vector<SelftestCheck> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"(check threw)", false, e.what()});
    }
  }
  if (!inject_fault.empty() && !flip) out.push_back({"fault injection", false, "unknown fault '" + inject_fault + "'"});
  return out;
}

}  // namespace drsplit
