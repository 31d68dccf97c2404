#include "aks/lie_context.hpp"

#include <Eigen/SVD>

namespace aks {

namespace {

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix elem(int n, int i, int j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

std::vector<Matrix> skew_basis(int n) {
  std::vector<Matrix> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out.push_back(elem(n, i, j) - elem(n, j, i));
  return out;
}

std::vector<Matrix> upper_basis(int n, AlgebraKind kind) {
  std::vector<Matrix> out;
  if (kind == AlgebraKind::Gl) {
    for (int i = 0; i < n; ++i) out.push_back(elem(n, i, i));
  } else {
    for (int i = 0; i + 1 < n; ++i)
      out.push_back(elem(n, i, i) - elem(n, i + 1, i + 1));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(elem(n, i, j));
  return out;
}

std::vector<Matrix> strict_lower_basis(int n) {
  std::vector<Matrix> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out.push_back(elem(n, i, j));
  return out;
}

}  // namespace

LieContext LieContext::qr_iwasawa(int n, AlgebraKind kind) {
  return LieContext(n, kind, SplittingKind::QrIwasawa, skew_basis(n),
                    upper_basis(n, kind));
}

LieContext LieContext::lu_gauss(int n, AlgebraKind kind) {
  return LieContext(n, kind, SplittingKind::LuGauss, strict_lower_basis(n),
                    upper_basis(n, kind));
}

LieContext LieContext::custom(int n, AlgebraKind kind,
                              std::vector<Matrix> basis_a,
                              std::vector<Matrix> basis_b) {
  return LieContext(n, kind, SplittingKind::Custom, std::move(basis_a),
                    std::move(basis_b));
}

LieContext::LieContext(int n, AlgebraKind kind, SplittingKind splitting,
                       std::vector<Matrix> basis_a, std::vector<Matrix> basis_b)
    : n_(n),
      kind_(kind),
      splitting_(splitting),
      basis_a_(std::move(basis_a)),
      basis_b_(std::move(basis_b)) {
  if (n <= 0) throw std::invalid_argument("matrix size must be positive");
  dim_ = (kind == AlgebraKind::Gl) ? n * n : n * n - 1;
  for (const Matrix& m : basis_a_)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("basis_a element has wrong size");
  for (const Matrix& m : basis_b_)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("basis_b element has wrong size");

  const int na = dim_a(), nb = dim_b(), nn = n * n;
  Matrix S(nn, na + nb);
  for (int k = 0; k < na; ++k) S.col(k) = vec(basis_a_[k]);
  for (int k = 0; k < nb; ++k) S.col(na + k) = vec(basis_b_[k]);

  // Least-squares coordinates over the stacked bases. For a well-formed
  // splitting S has full column rank and the coordinates are exact.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(S);
  coords_ = cod.pseudoInverse();

  pa_ = S.leftCols(na) * coords_.topRows(na);
  pb_ = S.rightCols(nb) * coords_.bottomRows(nb);
}

std::vector<Matrix> LieContext::basis_g() const {
  std::vector<Matrix> out = basis_a_;
  out.insert(out.end(), basis_b_.begin(), basis_b_.end());
  return out;
}

Matrix LieContext::remove_trace(const Matrix& m) const {
  if (kind_ == AlgebraKind::Gl) return m;
  return m - (m.trace() / n_) * Matrix::Identity(n_, n_);
}

Matrix LieContext::proj_a(const Matrix& x) const {
  return unvec(pa_ * vec(remove_trace(x)), n_);
}

Matrix LieContext::proj_b(const Matrix& x) const {
  return unvec(pb_ * vec(remove_trace(x)), n_);
}

AlgebraVector LieContext::algebra(Matrix rep) const {
  if (rep.rows() != n_ || rep.cols() != n_)
    throw std::invalid_argument("algebra element has wrong size");
  if (kind_ == AlgebraKind::Sl) {
    const double scale = 1.0 + rep.norm();
    if (std::abs(rep.trace()) > 1e-9 * scale)
      throw std::invalid_argument("sl algebra element must be traceless");
    rep = remove_trace(rep);  // scrub rounding-level trace
  }
  return AlgebraVector{std::move(rep)};
}

DualVector LieContext::dual(Matrix rep) const {
  if (rep.rows() != n_ || rep.cols() != n_)
    throw std::invalid_argument("dual element has wrong size");
  return DualVector{remove_trace(rep)};
}

GroupElement LieContext::group(Matrix rep) const {
  if (rep.rows() != n_ || rep.cols() != n_)
    throw std::invalid_argument("group element has wrong size");
  const double det = rep.determinant();
  if (std::abs(det) <= 1e-12)
    throw std::invalid_argument("singular group matrix rejected");
  if (kind_ == AlgebraKind::Sl && std::abs(det - 1.0) > 1e-9)
    throw std::invalid_argument("sl group element must have determinant 1");
  return GroupElement{std::move(rep)};
}

GroupElement LieContext::identity() const {
  return GroupElement{Matrix::Identity(n_, n_)};
}

DualVector LieContext::flat(const AlgebraVector& x) const {
  return DualVector{remove_trace(x.rep)};
}

AlgebraVector LieContext::sharp(const DualVector& phi) const {
  return AlgebraVector{phi.rep};
}

DualVector LieContext::project_a0(const DualVector& phi) const {
  // tr(F'·X) = tr(F·π_𝔟 X) for all X  ⇒  vec(F'ᵀ) = π_𝔟ᵀ vec(Fᵀ).
  Matrix ft = phi.rep.transpose();
  Matrix res = unvec(pb_.transpose() * vec(ft), n_).transpose();
  return DualVector{remove_trace(res)};
}

DualVector LieContext::project_b0(const DualVector& phi) const {
  Matrix ft = phi.rep.transpose();
  Matrix res = unvec(pa_.transpose() * vec(ft), n_).transpose();
  return DualVector{remove_trace(res)};
}

AlgebraVector LieContext::bracket(const AlgebraVector& x,
                                  const AlgebraVector& y) const {
  if (x.rep.rows() != n_ || y.rep.rows() != n_)
    throw std::invalid_argument("bracket: dimension mismatch");
  return AlgebraVector{x.rep * y.rep - y.rep * x.rep};
}

DualVector LieContext::coad_ad(const AlgebraVector& xi,
                               const DualVector& phi) const {
  return DualVector{xi.rep * phi.rep - phi.rep * xi.rep};
}

DualVector LieContext::coad_Ad(const GroupElement& g,
                               const DualVector& phi) const {
  if (std::abs(g.rep.determinant()) <= 1e-12)
    throw std::invalid_argument("coad_Ad: singular group element");
  Eigen::PartialPivLU<Matrix> lu(g.rep);
  return DualVector{remove_trace(g.rep * phi.rep * lu.inverse())};
}

NondegeneracyResult LieContext::check_nondegeneracy(const GroupElement& g) const {
  const int na = dim_a(), nb = dim_b(), nn = n_ * n_;
  Matrix ginv = g.rep.inverse();
  Matrix S(nn, nb + na);
  for (int k = 0; k < nb; ++k) S.col(k) = vec(basis_b_[k]);
  for (int k = 0; k < na; ++k)
    S.col(nb + k) = vec((g.rep * basis_a_[k] * ginv).eval());
  Eigen::JacobiSVD<Matrix> svd(S, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = 1e-10 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  NondegeneracyResult out;
  out.ok = (rank == nb + na);
  out.witness = AlgebraVector{Matrix::Zero(n_, n_)};
  if (!out.ok) {
    // null vector c: Σ c_b·b = −Σ c_a·Ad_g a lies in the intersection
    Vector c = svd.matrixV().col(nb + na - 1);
    Matrix w = Matrix::Zero(n_, n_);
    for (int k = 0; k < nb; ++k) w += c(k) * basis_b_[k];
    out.witness.rep = w;
  }
  return out;
}

Vector LieContext::algebra_coords(const Matrix& x) const {
  return coords_ * vec(remove_trace(x));
}

Matrix LieContext::from_algebra_coords(const Vector& c) const {
  Matrix out = Matrix::Zero(n_, n_);
  const int na = dim_a();
  for (int k = 0; k < na; ++k) out += c(k) * basis_a_[k];
  for (int k = 0; k < dim_b(); ++k) out += c(na + k) * basis_b_[k];
  return out;
}

bool ContextValidation::ok(double tol) const {
  return closure_a <= tol && closure_b <= tol && direct_sum_defect == 0 &&
         projector_residual <= tol && pairing_gram_min_sv > tol &&
         ad_invariance <= tol;
}

ContextValidation validate_context(const LieContext& ctx) {
  ContextValidation v;
  const auto check_closure = [&](const std::vector<Matrix>& basis,
                                 bool is_a) -> double {
    double worst = 0;
    for (const Matrix& x : basis)
      for (const Matrix& y : basis) {
        Matrix br = x * y - y * x;
        Matrix out = is_a ? (br - ctx.proj_a(br)) : (br - ctx.proj_b(br));
        worst = std::max(worst, out.norm());
      }
    return worst;
  };
  v.closure_a = check_closure(ctx.basis_a(), true);
  v.closure_b = check_closure(ctx.basis_b(), false);

  const int na = ctx.dim_a(), nb = ctx.dim_b(), nn = ctx.n() * ctx.n();
  Matrix S(nn, na + nb);
  {
    int k = 0;
    for (const Matrix& m : ctx.basis_a())
      S.col(k++) = Eigen::Map<const Vector>(m.data(), nn);
    for (const Matrix& m : ctx.basis_b())
      S.col(k++) = Eigen::Map<const Vector>(m.data(), nn);
  }
  Eigen::JacobiSVD<Matrix> svd(S);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++rank;
  v.direct_sum_defect =
      (na + nb != ctx.dim()) ? std::abs(na + nb - ctx.dim()) : ctx.dim() - rank;

  double pr = 0;
  for (const Matrix& m : ctx.basis_g()) {
    pr = std::max(pr, (m - ctx.proj_a(m) - ctx.proj_b(m)).norm());
    pr = std::max(pr, (ctx.proj_a(ctx.proj_a(m)) - ctx.proj_a(m)).norm());
    pr = std::max(pr, (ctx.proj_b(ctx.proj_b(m)) - ctx.proj_b(m)).norm());
    pr = std::max(pr, ctx.proj_a(ctx.proj_b(m)).norm());
  }
  v.projector_residual = pr;

  auto bg = ctx.basis_g();
  const int m = static_cast<int>(bg.size());
  Matrix gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = ctx.pair(bg[i], bg[j]);
  Eigen::JacobiSVD<Matrix> gs(gram);
  v.pairing_gram_min_sv = gs.singularValues().minCoeff();

  double adinv = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Matrix zx = bg[i] * bg[j] - bg[j] * bg[i];
        Matrix zy = bg[i] * bg[k] - bg[k] * bg[i];
        adinv = std::max(adinv, std::abs(ctx.pair(zx, bg[k]) +
                                         ctx.pair(bg[j], zy)));
      }
  v.ad_invariance = adinv;
  return v;
}

}  // namespace aks
