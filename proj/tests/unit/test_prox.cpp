#include <doctest.h>

#include <cmath>
#include <numbers>

#include "drsplit/errors.hpp"
#include "drsplit/prox.hpp"
#include "drsplit/random.hpp"

using namespace drsplit;

TEST_CASE("quadratic fidelity resolvent") {
  SeededRng rng(10);
  GridImage f(8, 8), xhat(8, 8);
  for (auto& v : f.values()) v = rng.uniform(0.0, 1.0);
  for (auto& v : xhat.values()) v = rng.normal();

  SUBCASE("data is a fixed point") { CHECK(prox_quadratic_fidelity(f, f, 0.3) == f); }

  SUBCASE("scalar substitution") {
    CHECK(prox_quadratic_fidelity(GridImage(1, 1, 0.0), GridImage(1, 1, 1.0), 1.0).values()[0] == 0.5);
  }

  SUBCASE("optimality condition") {
    const double sigma = 0.7;
    const GridImage out = prox_quadratic_fidelity(xhat, f, sigma);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = (xhat.values()[i] - out.values()[i]) / sigma - (out.values()[i] - f.values()[i]);
      CHECK(std::abs(r) <= 1e-12);
    }
  }

  SUBCASE("agrees with a ternary search along the segment") {
    const double sigma = 2.3;
    const GridImage out = prox_quadratic_fidelity(xhat, f, sigma);
    // Objective restricted to v = xhat + t (f - xhat), summed over pixels.
    auto obj = [&](double t) {
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = xhat.values()[i] + t * (f.values()[i] - xhat.values()[i]);
        s += 0.5 * (v - xhat.values()[i]) * (v - xhat.values()[i]) +
             0.5 * sigma * (v - f.values()[i]) * (v - f.values()[i]);
      }
      return s;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      (obj(m1) < obj(m2) ? hi : lo) = (obj(m1) < obj(m2) ? m2 : m1);
    }
    double mine = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double v = out.values()[i];
      mine += 0.5 * (v - xhat.values()[i]) * (v - xhat.values()[i]) +
              0.5 * sigma * (v - f.values()[i]) * (v - f.values()[i]);
    }
    CHECK(std::abs(mine - obj(0.5 * (lo + hi))) <= 1e-10);
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(prox_quadratic_fidelity(GridImage(2, 2), GridImage(2, 3), 1.0), ContractViolation);
  }
}

TEST_CASE("projection onto the isotropic ball") {
  SUBCASE("radial scaling of one pixel") {
    DualField p(1, 1);
    p.comp1()[0] = 3.0;
    p.comp2()[0] = 4.0;
    const DualField q = project_inf_ball(p, 1.0);
    CHECK(q.comp1()[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(q.comp2()[0] == doctest::Approx(0.8).epsilon(1e-15));
  }

  SeededRng rng(11);
  DualField p(7, 5);
  for (auto& v : p.data()) v = rng.normal();

  SUBCASE("points inside are unchanged") {
    const DualField inside = project_inf_ball(p, 1.0);
    CHECK(project_inf_ball(inside, 1.0) == inside);
    DualField small(7, 5);
    for (std::size_t i = 0; i < small.data().size(); ++i) small.data()[i] = 1e-3 * p.data()[i];
    CHECK(project_inf_ball(small, 1.0) == small);
  }

  SUBCASE("per-pixel norms respect alpha") {
    const double alpha = 0.4;
    const DualField q = project_inf_ball(p, alpha);
    for (std::size_t i = 0; i < q.pixels(); ++i)
      CHECK(std::hypot(q.comp1()[i], q.comp2()[i]) <= alpha * (1.0 + 1e-15));
  }
}

TEST_CASE("Huber dual resolvent") {
  SUBCASE("one pixel") {
    DualField p(1, 1);
    p.comp1()[0] = 1.0;
    const DualField q = prox_huber_dual(p, 1.0, 1.0, 1.0);
    CHECK(q.comp1()[0] == 0.5);
    CHECK(q.comp2()[0] == 0.0);
  }

  SeededRng rng(12);
  DualField p(6, 6);
  for (auto& v : p.data()) v = 2.0 * rng.normal();

  SUBCASE("no quadratic term reduces to the projection bit for bit") {
    CHECK(prox_huber_dual(p, 0.8, 0.0, 3.0) == project_inf_ball(p, 0.8));
  }

  SUBCASE("minimizes over the disc against a polar grid search") {
    const double alpha = 1.0, lambda = 0.7, tau = 0.9;
    for (int s = 0; s < 6; ++s) {
      const double a = 2.5 * rng.normal(), b = 2.5 * rng.normal();
      DualField one(1, 1);
      one.comp1()[0] = a;
      one.comp2()[0] = b;
      const DualField q = prox_huber_dual(one, alpha, lambda, tau);
      auto obj = [&](double x, double y) {
        return ((x - a) * (x - a) + (y - b) * (y - b)) / (2.0 * tau) + 0.5 * lambda * (x * x + y * y);
      };
      double best = std::numeric_limits<double>::infinity(), bx = 0.0, by = 0.0;
      for (int ir = 0; ir <= 400; ++ir)
        for (int it = 0; it < 400; ++it) {
          const double r = alpha * ir / 400.0, t = 2.0 * std::numbers::pi * it / 400.0;
          const double x = r * std::cos(t), y = r * std::sin(t);
          if (obj(x, y) < best) {
            best = obj(x, y);
            bx = x;
            by = y;
          }
        }
      CHECK(obj(q.comp1()[0], q.comp2()[0]) <= best + 1e-12);
      CHECK(std::hypot(q.comp1()[0] - bx, q.comp2()[0] - by) <= 1e-2);
    }
  }
}

TEST_CASE("resolvents are nonexpansive") {
  SeededRng rng(13);
  GridImage f(4, 4);
  for (auto& v : f.values()) v = rng.uniform(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    GridImage a(4, 4), b(4, 4);
    DualField pa(4, 4), pb(4, 4);
    for (auto& v : a.values()) v = rng.normal();
    for (auto& v : b.values()) v = rng.normal();
    for (auto& v : pa.data()) v = rng.normal();
    for (auto& v : pb.data()) v = rng.normal();
    const double sigma = rng.uniform(0.01, 10.0);
    auto ratio = [](std::span<const double> x, std::span<const double> y, std::span<const double> fx,
                    std::span<const double> fy) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        num += (fx[i] - fy[i]) * (fx[i] - fy[i]);
        den += (x[i] - y[i]) * (x[i] - y[i]);
      }
      return std::sqrt(num / den);
    };
    worst = std::max(worst, ratio(a.values(), b.values(), prox_quadratic_fidelity(a, f, sigma).values(),
                                  prox_quadratic_fidelity(b, f, sigma).values()));
    worst = std::max(worst, ratio(pa.data(), pb.data(), project_inf_ball(pa, 0.5).data(),
                                  project_inf_ball(pb, 0.5).data()));
    worst = std::max(worst, ratio(pa.data(), pb.data(), prox_huber_dual(pa, 0.5, 0.2, sigma).data(),
                                  prox_huber_dual(pb, 0.5, 0.2, sigma).data()));
  }
  CHECK(worst <= 1.0 + 1e-12);
}
