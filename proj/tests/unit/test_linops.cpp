#include <doctest.h>

#include <cmath>

#include "drsplit/dense.hpp"
#include "drsplit/linops.hpp"
#include "drsplit/random.hpp"

using namespace drsplit;

namespace {

GridImage random_image(std::size_t w, std::size_t h, SeededRng& rng) {
  GridImage u(w, h);
  for (auto& v : u.values()) v = rng.normal();
  return u;
}

DualField random_field(std::size_t w, std::size_t h, SeededRng& rng) {
  DualField p(w, h);
  for (auto& v : p.data()) v = rng.normal();
  return p;
}

// Independent double-sum evaluation of <grad u, p> straight from the
// difference formulas.
double grad_pairing(const GridImage& u, const DualField& p) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.height(); ++j)
    for (std::size_t i = 0; i < u.width(); ++i) {
      if (i + 1 < u.width()) s += (u(i + 1, j) - u(i, j)) * p.comp1()[j * u.width() + i];
      if (j + 1 < u.height()) s += (u(i, j + 1) - u(i, j)) * p.comp2()[j * u.width() + i];
    }
  return s;
}

}  // namespace

TEST_CASE("gradient of a constant image vanishes") {
  const DualField g = grad_apply(GridImage(3, 3, 5.0));
  for (double v : g.data()) CHECK(v == 0.0);
}

TEST_CASE("gradient of a single row") {
  const DualField g = grad_apply(GridImage(3, 1, Vec{0.0, 1.0, 3.0}));
  CHECK(Vec(g.comp1().begin(), g.comp1().end()) == Vec{1.0, 2.0, 0.0});
  CHECK(Vec(g.comp2().begin(), g.comp2().end()) == Vec{0.0, 0.0, 0.0});
}

TEST_CASE("gradient along the vertical axis fills comp2") {
  const DualField g = grad_apply(GridImage(1, 3, Vec{0.0, 1.0, 3.0}));
  CHECK(Vec(g.comp1().begin(), g.comp1().end()) == Vec{0.0, 0.0, 0.0});
  CHECK(Vec(g.comp2().begin(), g.comp2().end()) == Vec{1.0, 2.0, 0.0});
}

TEST_CASE("divergence of a single row transposes the difference matrix") {
  const double a = 0.7, b = -1.3;
  DualField p(3, 1);
  p.comp1()[0] = a;
  p.comp1()[1] = b;
  const GridImage d = div_apply(p);
  CHECK(d.values()[0] == doctest::Approx(a));
  CHECK(d.values()[1] == doctest::Approx(b - a));
  CHECK(d.values()[2] == doctest::Approx(-b));
}

TEST_CASE("divergence of zero is zero") {
  const GridImage d = div_apply(DualField(4, 5));
  for (double v : d.values()) CHECK(v == 0.0);
}

TEST_CASE("grad and -div are adjoint against a direct double sum") {
  SeededRng rng(2);
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{16, 16}, {7, 3}, {1, 9}, {32, 5}}) {
    const GridImage u = random_image(w, h, rng);
    const DualField p = random_field(w, h, rng);
    const double direct = grad_pairing(u, p);
    const double via_grad = dot(grad_apply(u).data(), p.data());
    const double via_div = -dot(u.values(), div_apply(p).values());
    const double scale = norm2(u.values()) * norm2(p.data());
    CHECK(std::abs(direct - via_grad) <= 1e-12 * scale);
    CHECK(std::abs(direct - via_div) <= 1e-12 * scale);
  }
}

TEST_CASE("normal operator") {
  SeededRng rng(3);
  SUBCASE("c = 0 is the identity") {
    const GridImage u = random_image(5, 4, rng);
    CHECK(normal_apply(u, 0.0) == u);
  }
  SUBCASE("constants are fixed") {
    const GridImage out = normal_apply(GridImage(6, 3, 2.5), 11.0);
    for (double v : out.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
  }
  SUBCASE("matches I + c G^T G") {
    const double c = 3.0;
    const DenseMatrix g = dense_materialize(gradient_operator(8, 8));
    const DenseMatrix t = DenseMatrix::Identity(64, 64) + c * g.transpose() * g;
    const GridImage u = random_image(8, 8, rng);
    const Eigen::VectorXd ref = t * Eigen::Map<const Eigen::VectorXd>(u.values().data(), 64);
    const GridImage out = normal_apply(u, c);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(out.values()[i] - ref(i)) <= 1e-12);
  }
  SUBCASE("symmetric and bounded below by the identity") {
    for (int s = 0; s < 10; ++s) {
      const GridImage u = random_image(9, 7, rng), v = random_image(9, 7, rng);
      const double c = rng.uniform(0.0, 20.0);
      const double tuv = dot(normal_apply(u, c).values(), v.values());
      const double utv = dot(u.values(), normal_apply(v, c).values());
      CHECK(std::abs(tuv - utv) <= 1e-12 * (1.0 + std::abs(tuv)));
      CHECK(dot(normal_apply(u, c).values(), u.values()) >= dot(u.values(), u.values()) * (1.0 - 1e-15));
    }
  }
}

TEST_CASE("operators are linear") {
  SeededRng rng(4);
  const GridImage u = random_image(6, 5, rng), v = random_image(6, 5, rng);
  const double a = 1.7, b = -0.4;
  GridImage comb(6, 5);
  for (std::size_t i = 0; i < comb.size(); ++i) comb.values()[i] = a * u.values()[i] + b * v.values()[i];
  const DualField gu = grad_apply(u), gv = grad_apply(v), gc = grad_apply(comb);
  for (std::size_t i = 0; i < gc.data().size(); ++i)
    CHECK(gc.data()[i] == doctest::Approx(a * gu.data()[i] + b * gv.data()[i]));
}

TEST_CASE("power iteration") {
  CHECK(power_norm(zero_operator(4, 6), 50, 1) == 0.0);
  CHECK(power_norm(gradient_operator(2, 1), 50, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const double L = power_norm(gradient_operator(32, 32), 200, 1);
  CHECK(L > 2.7);
  CHECK(L * L <= 8.0 + 1e-9);
  SUBCASE("estimates grow with the iteration count") {
    double prev = 0.0;
    for (int it : {1, 5, 20, 80}) {
      const double e = power_norm(gradient_operator(12, 10), it, 9);
      CHECK(e >= prev * (1.0 - 1e-14));
      prev = e;
    }
  }
  SUBCASE("reproducible for a fixed seed") {
    CHECK(power_norm(gradient_operator(9, 9), 30, 5) == power_norm(gradient_operator(9, 9), 30, 5));
  }
}

TEST_CASE("materialized gradient of a 2x1 grid") {
  const DenseMatrix g = dense_materialize(gradient_operator(2, 1));
  REQUIRE(g.rows() == 4);
  REQUIRE(g.cols() == 2);
  CHECK(g(0, 0) == -1.0);
  CHECK(g(0, 1) == 1.0);
  CHECK(g.bottomRows(3).cwiseAbs().maxCoeff() == 0.0);
}
