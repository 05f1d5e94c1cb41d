#include "drsplit/dense.hpp"

#include <cmath>
#include <string>

#include "drsplit/errors.hpp"

namespace drsplit {

DenseMatrix dense_materialize(const LinearOperator& op) {
  if (op.cols > kDenseSizeGuard || op.rows > 2 * kDenseSizeGuard)
    throw SizeGuardError("dense_materialize: operator larger than the dense guard (" +
                         std::to_string(kDenseSizeGuard) + " columns)");
  DenseMatrix a(op.rows, op.cols);
  Vec e(op.cols, 0.0);
  Vec col(op.rows);
  for (std::size_t j = 0; j < op.cols; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < op.rows; ++i) a(i, j) = col[i];
  }
  return a;
}

Vec dense_solve(const DenseMatrix& a_in, std::span<const double> b) {
  const auto n = static_cast<std::size_t>(a_in.rows());
  if (a_in.cols() != a_in.rows()) throw ContractViolation("dense_solve: matrix not square");
  if (b.size() != n) throw ContractViolation("dense_solve: right-hand side length mismatch");
  if (n > kDenseSizeGuard) throw SizeGuardError("dense_solve: system larger than the dense guard");

  DenseMatrix a = a_in;
  Vec x(b.begin(), b.end());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) < 1e-12 * scale)
      throw SingularMatrixError("dense_solve: matrix singular to tolerance at column " +
                                std::to_string(k));
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a(i, k) / a(k, k);
      if (m == 0.0) continue;
      a.row(i).tail(n - k) -= m * a.row(k).tail(n - k);
      x[i] -= m * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

Eigen::VectorXd symmetric_eigenvalues(const DenseMatrix& a) {
  const DenseMatrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double spectral_norm(const DenseMatrix& a) {
  Eigen::JacobiSVD<DenseMatrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace drsplit
