#include "aks/factorization.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace aks {

Matrix matrix_exp(const Matrix& x) { return x.exp(); }
Matrix matrix_log(const Matrix& x) { return x.log(); }

namespace {

Factors factorize_qr(const LieContext& ctx, const GroupElement& g) {
  Eigen::HouseholderQR<Matrix> qr(g.rep);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < r.rows(); ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  return Factors{ctx.group(q), ctx.group(r), 0};
}

Factors factorize_lu(const LieContext& ctx, const GroupElement& g) {
  const int n = ctx.n();
  Matrix l = Matrix::Identity(n, n);
  Matrix u = g.rep;
  const double scale = g.rep.norm();
  for (int k = 0; k < n; ++k) {
    if (std::abs(u(k, k)) <= 1e-13 * scale) throw NotFactorizable(k + 1);
    for (int i = k + 1; i < n; ++i) {
      const double m = u(i, k) / u(k, k);
      l(i, k) = m;
      u.row(i) -= m * u.row(k);
      u(i, k) = 0.0;  // eliminate exactly
    }
  }
  return Factors{ctx.group(l), ctx.group(u), 0};
}

}  // namespace

Factors factorize(const LieContext& ctx, const GroupElement& g) {
  switch (ctx.splitting_kind()) {
    case SplittingKind::QrIwasawa:
      return factorize_qr(ctx, g);
    case SplittingKind::LuGauss:
      return factorize_lu(ctx, g);
    case SplittingKind::Custom:
      return factorize_newton(ctx, g);
  }
  throw std::logic_error("unreachable");
}

Factors factorize_newton(const LieContext& ctx, const GroupElement& g,
                         std::optional<Factors> guess, int max_iter,
                         double tol) {
  Matrix ga = guess ? guess->a.rep : Matrix(Matrix::Identity(ctx.n(), ctx.n()));
  Matrix gb = guess ? guess->b.rep : Matrix(Matrix::Identity(ctx.n(), ctx.n()));
  double residual = 0;
  for (int it = 0; it <= max_iter; ++it) {
    Matrix defect = matrix_log((ga.inverse() * g.rep * gb.inverse()).eval());
    residual = defect.norm();
    if (residual <= tol)
      return Factors{ctx.group(ga), ctx.group(gb), it};
    if (it == max_iter) break;
    ga = ga * matrix_exp(ctx.proj_a(defect));
    gb = matrix_exp(ctx.proj_b(defect)) * gb;
  }
  throw NoConvergence(residual);
}

}  // namespace aks
