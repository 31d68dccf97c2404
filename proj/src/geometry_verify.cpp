#include "aks/geometry_verify.hpp"

#include <Eigen/SVD>
#include <random>

namespace aks {

namespace {

int svd_rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double thresh = (sv.size() > 0 && sv(0) > 0) ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return rank;
}

Matrix svd_nullspace(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = (sv.size() > 0 && sv(0) > 0) ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

// Isotropy of φ inside the chosen subalgebra under the projected coadjoint
// action (π_{𝔟⁰}(ad♯_· φ) for 𝔞, π_{𝔞⁰}(ad♯_· φ) for 𝔟).
std::vector<AlgebraVector> orbit_isotropy(const LieContext& ctx,
                                          const std::vector<Matrix>& basis,
                                          const DualVector& phi,
                                          bool project_to_b0) {
  const int n = ctx.n(), m = static_cast<int>(basis.size());
  Matrix map(n * n, m);
  for (int k = 0; k < m; ++k) {
    DualVector d = ctx.coad_ad(AlgebraVector{basis[k]}, phi);
    DualVector pr = project_to_b0 ? ctx.project_b0(d) : ctx.project_a0(d);
    map.col(k) = Eigen::Map<const Vector>(pr.rep.data(), n * n);
  }
  Matrix null = svd_nullspace(map);
  std::vector<AlgebraVector> out;
  for (int k = 0; k < null.cols(); ++k) {
    Matrix v = Matrix::Zero(n, n);
    for (int j = 0; j < m; ++j) v += null(j, k) * basis[j];
    out.push_back(AlgebraVector{v});
  }
  return out;
}

double kks_value(const LieContext& ctx, const OrbitPoint& o,
                 const OrbitTangentGens& U, const OrbitTangentGens& V,
                 bool flip_sign) {
  const Matrix bxi = U.xi.rep * V.xi.rep - V.xi.rep * U.xi.rep;
  const Matrix bze = U.zeta.rep * V.zeta.rep - V.zeta.rep * U.zeta.rep;
  const double s = flip_sign ? 1.0 : -1.0;
  return (o.omega1.rep * bxi).trace() + s * (o.omega2.rep * bze).trace();
}

}  // namespace

double canonical_form(const LieContext& ctx, const PhasePoint& p,
                      const PhaseTangent& X, const PhaseTangent& Y) {
  const Matrix br = X.xi.rep * Y.xi.rep - Y.xi.rep * X.xi.rep;
  (void)ctx;
  return (X.eta.rep * Y.xi.rep).trace() - (Y.eta.rep * X.xi.rep).trace() -
         (p.sigma.rep * br).trace();
}

double lambda_tangency_residual(const AKSSystem& sys, const PhasePoint& p,
                                const PhaseTangent& X) {
  const LieContext& ctx = sys.ctx();
  DualVector inner{X.eta.rep + X.xi.rep * p.sigma.rep -
                   p.sigma.rep * X.xi.rep};
  return ctx.project_b0(ctx.coad_Ad(p.g, inner)).rep.norm() +
         ctx.project_a0(X.eta).rep.norm();
}

std::vector<PhaseTangent> lambda_tangent_basis(const AKSSystem& sys,
                                               const PhasePoint& p) {
  const LieContext& ctx = sys.ctx();
  const double res = constraint_residual(sys, p);
  if (res > 1e-8) throw OffLevelSet(res);
  const int g = ctx.dim(), a = ctx.dim_a(), b = ctx.dim_b();
  auto bg = ctx.basis_g();

  Matrix jac(a + b, 2 * g);
  for (int k = 0; k < 2 * g; ++k) {
    Matrix xi = k < g ? bg[k] : Matrix::Zero(ctx.n(), ctx.n());
    Matrix eta = k < g ? Matrix::Zero(ctx.n(), ctx.n()) : bg[k - g];
    DualVector inner{eta + xi * p.sigma.rep - p.sigma.rep * xi};
    DualVector c1 = ctx.project_b0(ctx.coad_Ad(p.g, inner));
    DualVector c2 = ctx.project_a0(DualVector{eta});
    for (int i = 0; i < a; ++i)
      jac(i, k) = ctx.eval(c1, AlgebraVector{ctx.basis_a()[i]});
    for (int i = 0; i < b; ++i)
      jac(a + i, k) = ctx.eval(c2, AlgebraVector{ctx.basis_b()[i]});
  }
  Matrix null = svd_nullspace(jac);

  Factors f = factorize(ctx, p.g);
  DualVector sb = ctx.coad_Ad(f.b, p.sigma);
  std::vector<PhaseTangent> out;
  for (int k = 0; k < null.cols(); ++k) {
    PhaseTangent t;
    t.xi.rep = ctx.from_algebra_coords(null.col(k).head(g));
    t.eta.rep = ctx.from_algebra_coords(null.col(k).tail(g));
    // conjugated form of the tangency condition must also vanish
    Matrix xb = f.b.rep * t.xi.rep * f.b.rep.inverse();
    DualVector eb = ctx.coad_Ad(f.b, t.eta);
    DualVector conj = ctx.project_b0(
        DualVector{xb * sb.rep - sb.rep * xb + eb.rep});
    if (conj.rep.norm() > 1e-9 * (1 + p.sigma.rep.norm()))
      throw std::runtime_error(
          "lambda_tangent_basis: conjugated tangency condition violated");
    out.push_back(std::move(t));
  }
  return out;
}

std::pair<DualVector, DualVector> M_derivative(const AKSSystem& sys,
                                               const PhasePoint& p,
                                               const PhaseTangent& v) {
  const LieContext& ctx = sys.ctx();
  const double res = constraint_residual(sys, p);
  if (res > 1e-8) throw OffLevelSet(res);
  Factors f = factorize(ctx, p.g);
  GroupElement ga_inv = ctx.group(f.a.rep.inverse());

  Matrix ad_xi = f.b.rep * v.xi.rep * f.b.rep.inverse();
  AlgebraVector xia{ctx.proj_a(ad_xi)};
  AlgebraVector xib{ctx.proj_b(ad_xi)};

  DualVector w1src = ctx.coad_Ad(ga_inv, sys.mu());
  DualVector w2src = ctx.coad_Ad(f.b, sys.nu());
  DualVector d1 = ctx.project_b0(ctx.coad_ad(xia, w1src));
  d1.rep = -d1.rep;
  DualVector d2 = ctx.project_a0(ctx.coad_ad(xib, w2src));

  // σ-based second row must agree.
  DualVector sb = ctx.coad_Ad(f.b, p.sigma);
  DualVector eb = ctx.coad_Ad(f.b, v.eta);
  DualVector common{xib.rep * sb.rep - sb.rep * xib.rep + eb.rep};
  const double alt = (ctx.project_b0(common).rep - d1.rep).norm() +
                     (ctx.project_a0(common).rep - d2.rep).norm();
  if (alt > 1e-9 * (1 + p.sigma.rep.norm() + v.eta.rep.norm()))
    throw std::runtime_error(
        "M_derivative: the two displayed rows disagree, residual " +
        std::to_string(alt));
  return {std::move(d1), std::move(d2)};
}

OrbitTangentGens image_tangent_gens(const AKSSystem& sys, const PhasePoint& p,
                                    const PhaseTangent& v) {
  const LieContext& ctx = sys.ctx();
  Factors f = factorize(ctx, p.g);
  Matrix ad_xi = f.b.rep * v.xi.rep * f.b.rep.inverse();
  OrbitTangentGens gens;
  gens.xi.rep = -ctx.proj_a(ad_xi);
  gens.zeta.rep = ctx.proj_b(ad_xi);
  return gens;
}

double kks_form(const LieContext& ctx, const OrbitPoint& o,
                const OrbitTangentGens& U, const OrbitTangentGens& V) {
  const double val = kks_value(ctx, o, U, V, false);
  // generator shifts by isotropy elements must not move the value
  auto iso_a = orbit_isotropy(ctx, ctx.basis_a(), o.omega1, true);
  auto iso_b = orbit_isotropy(ctx, ctx.basis_b(), o.omega2, false);
  const double scale =
      1 + o.omega1.rep.norm() + o.omega2.rep.norm();
  for (const auto& k : iso_a) {
    OrbitTangentGens Us = U;
    Us.xi.rep += k.rep;
    if (std::abs(kks_value(ctx, o, Us, V, false) - val) > 1e-9 * scale)
      throw std::runtime_error("kks_form: value depends on the generator "
                               "presentation (a-side)");
  }
  for (const auto& k : iso_b) {
    OrbitTangentGens Vs = V;
    Vs.zeta.rep += k.rep;
    if (std::abs(kks_value(ctx, o, U, Vs, false) - val) > 1e-9 * scale)
      throw std::runtime_error("kks_form: value depends on the generator "
                               "presentation (b-side)");
  }
  return val;
}

double pullback_check(const AKSSystem& sys, const PhasePoint& p, int trials,
                      std::uint64_t seed, bool flip_sign) {
  const LieContext& ctx = sys.ctx();
  auto basis = lambda_tangent_basis(sys, p);
  OrbitPoint o = L_map(sys, p);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);

  const auto random_tangent = [&]() {
    PhaseTangent t;
    t.xi.rep = Matrix::Zero(ctx.n(), ctx.n());
    t.eta.rep = Matrix::Zero(ctx.n(), ctx.n());
    for (const auto& bv : basis) {
      const double c = dist(rng);
      t.xi.rep += c * bv.xi.rep;
      t.eta.rep += c * bv.eta.rep;
    }
    return t;
  };

  double max_res = 0;
  for (int k = 0; k < trials; ++k) {
    PhaseTangent u = random_tangent();
    PhaseTangent v = random_tangent();
    OrbitTangentGens gu = image_tangent_gens(sys, p, u);
    OrbitTangentGens gv = image_tangent_gens(sys, p, v);
    const double lhs = canonical_form(ctx, p, u, v);
    const double rhs = kks_value(ctx, o, gu, gv, flip_sign);
    max_res = std::max(max_res, std::abs(lhs - rhs));
  }
  return max_res;
}

std::vector<PhaseTangent> kernel_directions(const AKSSystem& sys,
                                            const PhasePoint& p) {
  const LieContext& ctx = sys.ctx();
  const double res = constraint_residual(sys, p);
  if (res > 1e-8) throw OffLevelSet(res);
  const Matrix ginv = p.g.rep.inverse();
  std::vector<PhaseTangent> out;
  for (const auto& kap : isotropy_subalgebra(sys, IsotropySide::AMu)) {
    PhaseTangent t;
    t.xi.rep = ginv * kap.rep * p.g.rep;
    t.eta.rep = Matrix::Zero(ctx.n(), ctx.n());
    out.push_back(std::move(t));
  }
  for (const auto& om : isotropy_subalgebra(sys, IsotropySide::BNu)) {
    PhaseTangent t;
    t.xi.rep = -om.rep;
    t.eta.rep = om.rep * p.sigma.rep - p.sigma.rep * om.rep;
    out.push_back(std::move(t));
  }
  return out;
}

PhaseTangent lifted_action_generator(const AKSSystem& sys, const PhasePoint& p,
                                     const AlgebraVector& kappa,
                                     const AlgebraVector& omega, double h) {
  const LieContext& ctx = sys.ctx();
  const auto moved = [&](double t) {
    Matrix a = matrix_exp((t * kappa.rep).eval());
    Matrix b = matrix_exp((t * omega.rep).eval());
    Matrix g = a * p.g.rep * b.inverse();
    Matrix s = b * p.sigma.rep * b.inverse();
    return std::pair<Matrix, Matrix>{std::move(g), std::move(s)};
  };
  auto [gp, sp] = moved(h);
  auto [gm, sm] = moved(-h);
  PhaseTangent out;
  out.xi.rep = p.g.rep.inverse() * ((gp - gm) / (2 * h));
  out.eta.rep = (sp - sm) / (2 * h);
  (void)ctx;
  return out;
}

int restricted_form_kernel_dim(const AKSSystem& sys, const PhasePoint& p) {
  auto basis = lambda_tangent_basis(sys, p);
  const int m = static_cast<int>(basis.size());
  Matrix form(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      form(i, j) = canonical_form(sys.ctx(), p, basis[i], basis[j]);
  return m - svd_rank(form);
}

}  // namespace aks
