#include "drsplit/linops.hpp"

#include <algorithm>
#include <cmath>

#include "drsplit/errors.hpp"
#include "drsplit/parallel.hpp"
#include "drsplit/random.hpp"

namespace drsplit {
namespace {

void check_sizes(std::size_t width, std::size_t height, std::size_t u_len, std::size_t p_len) {
  const std::size_t n = width * height;
  if (n == 0 || u_len != n || p_len != 2 * n)
    throw ContractViolation("grid operator: buffer sizes do not match the grid");
}

// Row-chunked kernels: every output row depends only on its own input rows,
// so chunks can run concurrently.
void for_rows(std::size_t width, std::size_t height,
              const std::function<void(std::size_t, std::size_t)>& rows) {
  parallel_for(height * width, [&](std::size_t b, std::size_t e) {
    const std::size_t jb = b / width;
    const std::size_t je = (e + width - 1) / width;
    // Only the chunk owning the first pixel of a row processes that row.
    const std::size_t first = (b % width == 0) ? jb : jb + 1;
    if (first < je) rows(first, std::min(je, height));
  });
}

}  // namespace

void grad_apply(std::size_t width, std::size_t height, std::span<const double> u,
                std::span<double> p) {
  check_sizes(width, height, u.size(), p.size());
  const std::size_t n = width * height;
  double* p1 = p.data();
  double* p2 = p.data() + n;
  for_rows(width, height, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const std::size_t row = j * width;
      for (std::size_t i = 0; i + 1 < width; ++i) p1[row + i] = u[row + i + 1] - u[row + i];
      p1[row + width - 1] = 0.0;
      if (j + 1 < height) {
        for (std::size_t i = 0; i < width; ++i) p2[row + i] = u[row + width + i] - u[row + i];
      } else {
        for (std::size_t i = 0; i < width; ++i) p2[row + i] = 0.0;
      }
    }
  });
}

void div_apply(std::size_t width, std::size_t height, std::span<const double> p,
               std::span<double> out) {
  check_sizes(width, height, out.size(), p.size());
  const std::size_t n = width * height;
  const double* p1 = p.data();
  const double* p2 = p.data() + n;
  // Transpose of the forward-difference matrix: entries of p on the
  // Neumann boundary (last column of p1, last row of p2) do not contribute.
  for_rows(width, height, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const std::size_t row = j * width;
      for (std::size_t i = 0; i < width; ++i) {
        double v = 0.0;
        if (i + 1 < width) v += p1[row + i];
        if (i > 0) v -= p1[row + i - 1];
        if (j + 1 < height) v += p2[row + i];
        if (j > 0) v -= p2[row - width + i];
        out[row + i] = v;
      }
    }
  });
}

void normal_apply(std::size_t width, std::size_t height, std::span<const double> u, double c,
                  std::span<double> out) {
  const std::size_t n = width * height;
  if (u.size() != n || out.size() != n)
    throw ContractViolation("normal_apply: buffer sizes do not match the grid");
  if (!(c >= 0.0)) throw ContractViolation("normal_apply: c must be nonnegative");
  Vec p(2 * n);
  grad_apply(width, height, u, p);
  div_apply(width, height, p, out);
  for (std::size_t k = 0; k < n; ++k) out[k] = u[k] - c * out[k];
}

DualField grad_apply(const GridImage& u) {
  DualField p(u.width(), u.height());
  grad_apply(u.width(), u.height(), u.values(), p.data());
  return p;
}

GridImage div_apply(const DualField& p) {
  GridImage out(p.width(), p.height());
  div_apply(p.width(), p.height(), p.data(), out.values());
  return out;
}

GridImage normal_apply(const GridImage& u, double c) {
  GridImage out(u.width(), u.height());
  normal_apply(u.width(), u.height(), u.values(), c, out.values());
  return out;
}

Vec LinearOperator::operator()(std::span<const double> x) const {
  if (x.size() != cols) throw ContractViolation("LinearOperator: input length mismatch");
  Vec y(rows);
  apply(x, y);
  return y;
}

Vec LinearOperator::transpose(std::span<const double> y) const {
  if (y.size() != rows) throw ContractViolation("LinearOperator: adjoint input length mismatch");
  Vec x(cols);
  adjoint(y, x);
  return x;
}

LinearOperator gradient_operator(std::size_t width, std::size_t height) {
  const std::size_t n = width * height;
  return {2 * n, n,
          [=](std::span<const double> u, std::span<double> p) { grad_apply(width, height, u, p); },
          [=](std::span<const double> p, std::span<double> u) {
            div_apply(width, height, p, u);
            for (double& v : u) v = -v;
          }};
}

LinearOperator normal_operator(std::size_t width, std::size_t height, double c) {
  const std::size_t n = width * height;
  auto f = [=](std::span<const double> u, std::span<double> out) {
    normal_apply(width, height, u, c, out);
  };
  return {n, n, f, f};
}

LinearOperator identity_operator(std::size_t n) {
  auto f = [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
  return {n, n, f, f};
}

LinearOperator zero_operator(std::size_t rows, std::size_t cols) {
  auto f = [](std::span<const double>, std::span<double> y) {
    std::fill(y.begin(), y.end(), 0.0);
  };
  return {rows, cols, f, f};
}

LinearOperator scalar_operator(double s) {
  auto f = [s](std::span<const double> x, std::span<double> y) { y[0] = s * x[0]; };
  return {1, 1, f, f};
}

double power_norm(const LinearOperator& op, int iters, std::uint64_t seed) {
  if (iters < 1) throw ContractViolation("power_norm: iters must be >= 1");
  if (op.cols == 0) return 0.0;

  Vec v(op.cols);
  for (std::uint64_t s = seed;; ++s) {
    SeededRng rng(s);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    if (norm2(v) > 0.0) break;
  }

  Vec kv(op.rows);
  Vec w(op.cols);
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) break;
    for (double& x : v) x /= nv;
    op.apply(v, kv);
    // <K^*K v, v> = |K v|^2 for unit v.
    best = std::max(best, norm2(kv));
    op.adjoint(kv, w);
    v.swap(w);
  }
  return best;
}

}  // namespace drsplit
