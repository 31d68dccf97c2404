#include "aks/constraint_gnh.hpp"

#include <Eigen/SVD>
#include <random>

namespace aks {

namespace {

int tangent_dim(const LieContext& ctx) {
  return 3 * ctx.dim() + ctx.dim_a() + ctx.dim_b();
}

Vector tangent_coords(const LieContext& ctx, const ExtendedTangent& X) {
  const int g = ctx.dim(), a = ctx.dim_a(), b = ctx.dim_b();
  Vector c(tangent_dim(ctx));
  c.segment(0, g) = ctx.algebra_coords(X.xi.rep);
  c.segment(g, g) = ctx.algebra_coords(X.dJ.rep);
  c.segment(2 * g, a) = ctx.algebra_coords(X.dalpha.rep).head(a);
  c.segment(2 * g + a, b) = ctx.algebra_coords(X.dbeta.rep).tail(b);
  c.segment(2 * g + a + b, g) = ctx.algebra_coords(X.dsigma.rep);
  return c;
}

ExtendedTangent tangent_from_coords(const LieContext& ctx, const Vector& c) {
  const int g = ctx.dim(), a = ctx.dim_a(), b = ctx.dim_b();
  ExtendedTangent X{AlgebraVector{}, AlgebraVector{}, AlgebraVector{},
                    AlgebraVector{}, DualVector{}};
  X.xi.rep = ctx.from_algebra_coords(c.segment(0, g));
  X.dJ.rep = ctx.from_algebra_coords(c.segment(g, g));
  Vector ca = Vector::Zero(g);
  ca.head(a) = c.segment(2 * g, a);
  X.dalpha.rep = ctx.from_algebra_coords(ca);
  Vector cb = Vector::Zero(g);
  cb.tail(b) = c.segment(2 * g + a, b);
  X.dbeta.rep = ctx.from_algebra_coords(cb);
  X.dsigma.rep = ctx.from_algebra_coords(c.segment(2 * g + a + b, g));
  return X;
}

struct Subspace {
  Matrix basis;  // columns are coordinate vectors
  int dim() const { return static_cast<int>(basis.cols()); }
};

Subspace nullspace(const Matrix& m) {
  if (m.rows() == 0)
    return Subspace{Matrix::Identity(m.cols(), m.cols())};
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh =
      (sv.size() > 0 && sv(0) > 0) ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return Subspace{svd.matrixV().rightCols(m.cols() - rank)};
}

int subspace_rank(const Matrix& m) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double thresh =
      (sv.size() > 0 && sv(0) > 0) ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return rank;
}

bool same_subspace(const Subspace& p, const Subspace& q) {
  if (p.dim() != q.dim()) return false;
  Matrix stacked(p.basis.rows(), p.dim() + q.dim());
  stacked << p.basis, q.basis;
  return subspace_rank(stacked) == p.dim();
}

int intersection_dim(const Subspace& p, const Subspace& q) {
  Matrix stacked(p.basis.rows(), p.dim() + q.dim());
  stacked << p.basis, q.basis;
  return p.dim() + q.dim() - subspace_rank(stacked);
}

// ω₀ assembled as an antisymmetric matrix over the coordinate tangent basis.
Matrix omega0_matrix(const LieContext& ctx, const ExtendedPoint& l) {
  const int d = tangent_dim(ctx);
  std::vector<ExtendedTangent> basis;
  basis.reserve(d);
  for (int k = 0; k < d; ++k) {
    Vector e = Vector::Zero(d);
    e(k) = 1;
    basis.push_back(tangent_from_coords(ctx, e));
  }
  Matrix om(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      om(i, j) = omega0(ctx, l, basis[i], basis[j]);
  return om;
}

// Analytic Jacobian of the primary constraints over tangent coordinates.
Matrix primary_jacobian(const AKSSystem& sys, const ExtendedPoint& l) {
  const LieContext& ctx = sys.ctx();
  const int g = ctx.dim(), a = ctx.dim_a(), b = ctx.dim_b();
  const int d = tangent_dim(ctx);
  auto bg = ctx.basis_g();
  Matrix jac(g + a + b, d);
  for (int k = 0; k < d; ++k) {
    Vector e = Vector::Zero(d);
    e(k) = 1;
    ExtendedTangent X = tangent_from_coords(ctx, e);
    // d(J♭ − σ) = (δJ)♭ − δσ
    DualVector d1{ctx.remove_trace(X.dJ.rep) - X.dsigma.rep};
    // d(π_{𝔟⁰}(Ad♯_g σ)) = π_{𝔟⁰}(Ad♯_g(δσ + ad♯_ξ σ))
    DualVector inner{X.dsigma.rep + X.xi.rep * l.sigma.rep -
                     l.sigma.rep * X.xi.rep};
    DualVector d2 = ctx.project_b0(ctx.coad_Ad(l.g, inner));
    DualVector d3 = ctx.project_a0(X.dsigma);
    for (int i = 0; i < g; ++i)
      jac(i, k) = ctx.eval(d1, AlgebraVector{bg[i]});
    for (int i = 0; i < a; ++i)
      jac(g + i, k) = ctx.eval(d2, AlgebraVector{ctx.basis_a()[i]});
    for (int i = 0; i < b; ++i)
      jac(g + a + i, k) = ctx.eval(d3, AlgebraVector{ctx.basis_b()[i]});
  }
  return jac;
}

// Rows constraining δα to 𝔞_μ and δβ to 𝔟_ν (complement components).
Matrix secondary_jacobian(const AKSSystem& sys) {
  const LieContext& ctx = sys.ctx();
  const int g = ctx.dim(), a = ctx.dim_a(), b = ctx.dim_b();
  const int d = tangent_dim(ctx);

  const auto complement_rows = [&](const std::vector<AlgebraVector>& iso,
                                   const std::vector<Matrix>& basis,
                                   int offset) {
    const int m = static_cast<int>(basis.size());
    Matrix iso_coords(m, static_cast<int>(iso.size()));
    for (std::size_t k = 0; k < iso.size(); ++k) {
      Vector full = ctx.algebra_coords(iso[k].rep);
      iso_coords.col(static_cast<int>(k)) =
          (offset == 0) ? full.head(m) : full.tail(m);
    }
    // rows spanning the orthogonal complement of the isotropy span
    Subspace comp = nullspace(iso_coords.transpose());
    Matrix rows = Matrix::Zero(comp.dim(), d);
    const int col0 = (offset == 0) ? 2 * g : 2 * g + a;
    rows.block(0, col0, comp.dim(), m) = comp.basis.transpose();
    return rows;
  };

  Matrix ra = complement_rows(isotropy_subalgebra(sys, IsotropySide::AMu),
                              ctx.basis_a(), 0);
  Matrix rb = complement_rows(isotropy_subalgebra(sys, IsotropySide::BNu),
                              ctx.basis_b(), 1);
  Matrix out(ra.rows() + rb.rows(), d);
  out << ra, rb;
  (void)b;
  return out;
}

double subspace_distance(const LieContext& ctx, const AlgebraVector& x,
                         const std::vector<AlgebraVector>& span) {
  if (span.empty()) return x.rep.norm();
  const int nn = ctx.n() * ctx.n();
  Matrix S(nn, static_cast<int>(span.size()));
  for (std::size_t k = 0; k < span.size(); ++k)
    S.col(static_cast<int>(k)) =
        Eigen::Map<const Vector>(span[k].rep.data(), nn);
  Vector v = Eigen::Map<const Vector>(x.rep.data(), nn);
  Vector c = S.colPivHouseholderQr().solve(v);
  return (S * c - v).norm();
}

}  // namespace

ExtendedPoint make_extended_point(const LieContext& ctx, GroupElement g,
                                  AlgebraVector J, AlgebraVector alpha,
                                  AlgebraVector beta, DualVector sigma) {
  if (ctx.proj_b(alpha.rep).norm() > 1e-10 * (1 + alpha.rep.norm()))
    throw std::invalid_argument("alpha must lie in the subalgebra a");
  if (ctx.proj_a(beta.rep).norm() > 1e-10 * (1 + beta.rep.norm()))
    throw std::invalid_argument("beta must lie in the subalgebra b");
  return ExtendedPoint{std::move(g), std::move(J), std::move(alpha),
                       std::move(beta), std::move(sigma)};
}

ExtendedPoint step_extended(const LieContext& ctx, const ExtendedPoint& l,
                            const ExtendedTangent& X, double t) {
  ExtendedPoint out = l;
  out.g = ctx.group(l.g.rep * matrix_exp((t * X.xi.rep).eval()));
  out.J.rep += t * X.dJ.rep;
  out.alpha.rep += t * X.dalpha.rep;
  out.beta.rep += t * X.dbeta.rep;
  out.sigma.rep += t * X.dsigma.rep;
  return out;
}

double omega0(const LieContext& ctx, const ExtendedPoint& l,
              const ExtendedTangent& X, const ExtendedTangent& Y) {
  const Matrix br = X.xi.rep * Y.xi.rep - Y.xi.rep * X.xi.rep;
  return (X.dsigma.rep * Y.xi.rep).trace() -
         (Y.dsigma.rep * X.xi.rep).trace() - (l.sigma.rep * br).trace();
}

double extended_hamiltonian(const AKSSystem& sys, const ExtendedPoint& l) {
  const LieContext& ctx = sys.ctx();
  Matrix ginv_alpha = l.g.rep.inverse() * l.alpha.rep * l.g.rep;
  const double h =
      (l.sigma.rep * (ginv_alpha + l.beta.rep - l.J.rep)).trace() +
      0.5 * (l.J.rep * l.J.rep).trace() -
      (sys.mu().rep * l.alpha.rep).trace() -
      (sys.nu().rep * l.beta.rep).trace();
  // expanded form cross-check
  DualVector ads = ctx.coad_Ad(l.g, l.sigma);
  const double h2 =
      -0.5 * (l.sigma.rep * l.J.rep).trace() +
      0.5 * (((ctx.remove_trace(l.J.rep) - l.sigma.rep) * l.J.rep).trace()) +
      ((ads.rep - sys.mu().rep) * l.alpha.rep).trace() +
      ((l.sigma.rep - sys.nu().rep) * l.beta.rep).trace();
  const double scale = 1 + std::abs(h) + std::abs(h2);
  if (std::abs(h - h2) > 1e-11 * scale)
    throw std::runtime_error("extended_hamiltonian: closed forms disagree");
  return h;
}

std::array<DualVector, 3> primary_constraints(const AKSSystem& sys,
                                              const ExtendedPoint& l) {
  const LieContext& ctx = sys.ctx();
  DualVector c1{ctx.remove_trace(l.J.rep) - l.sigma.rep};
  DualVector c2{ctx.project_b0(ctx.coad_Ad(l.g, l.sigma)).rep -
                sys.mu().rep};
  DualVector c3{ctx.project_a0(l.sigma).rep - sys.nu().rep};
  return {std::move(c1), std::move(c2), std::move(c3)};
}

double primary_residual(const AKSSystem& sys, const ExtendedPoint& l) {
  auto c = primary_constraints(sys, l);
  return c[0].rep.norm() + c[1].rep.norm() + c[2].rep.norm();
}

ExtendedTangent f2_generator(const LieContext& ctx, const ExtendedPoint& l,
                             const AlgebraVector& kappa) {
  const int n = ctx.n();
  ExtendedTangent X;
  X.xi.rep = -(l.g.rep.inverse() * ctx.proj_a(kappa.rep) * l.g.rep);
  X.dJ.rep = Matrix::Zero(n, n);
  X.dalpha.rep = Matrix::Zero(n, n);
  X.dbeta.rep = Matrix::Zero(n, n);
  X.dsigma.rep = Matrix::Zero(n, n);
  return X;
}

ExtendedTangent f3_generator(const LieContext& ctx, const ExtendedPoint& l,
                             const AlgebraVector& omega) {
  const int n = ctx.n();
  Matrix pb = ctx.proj_b(omega.rep);
  ExtendedTangent X;
  X.xi.rep = pb;
  X.dJ.rep = Matrix::Zero(n, n);
  X.dalpha.rep = Matrix::Zero(n, n);
  X.dbeta.rep = Matrix::Zero(n, n);
  X.dsigma.rep = -(pb * l.sigma.rep - l.sigma.rep * pb);
  return X;
}

std::pair<double, double> stability_derivatives(const AKSSystem& sys,
                                                const ExtendedPoint& l,
                                                const AlgebraVector& kappa,
                                                const AlgebraVector& omega,
                                                StabilityFdCheck* fd) {
  const LieContext& ctx = sys.ctx();
  const double res = primary_residual(sys, l);
  if (res > 1e-8) throw OffPrimarySurface(res);

  DualVector admu = ctx.coad_ad(l.alpha, sys.mu());
  const double s2 = ctx.eval(admu, AlgebraVector{ctx.proj_a(kappa.rep)});
  DualVector adnu = ctx.project_a0(ctx.coad_ad(l.beta, sys.nu()));
  const double s3 = ctx.eval(adnu, AlgebraVector{ctx.proj_b(omega.rep)});

  if (fd) {
    const double h = 1e-6;
    ExtendedTangent x2 = f2_generator(ctx, l, kappa);
    ExtendedTangent x3 = f3_generator(ctx, l, omega);
    fd->fd2 = (extended_hamiltonian(sys, step_extended(ctx, l, x2, h)) -
               extended_hamiltonian(sys, step_extended(ctx, l, x2, -h))) /
              (2 * h);
    fd->fd3 = (extended_hamiltonian(sys, step_extended(ctx, l, x3, h)) -
               extended_hamiltonian(sys, step_extended(ctx, l, x3, -h))) /
              (2 * h);
    fd->residual2 = std::abs(fd->fd2 - s2);
    fd->residual3 = std::abs(fd->fd3 - s3);
  }
  return {s2, s3};
}

std::vector<ExtendedTangent> kernel_omega0(const LieContext& ctx,
                                           const ExtendedPoint& l) {
  Subspace ker = nullspace(omega0_matrix(ctx, l));
  std::vector<ExtendedTangent> out;
  for (int k = 0; k < ker.dim(); ++k)
    out.push_back(tangent_from_coords(ctx, ker.basis.col(k)));
  return out;
}

DualVector solve_sigma(const AKSSystem& sys, const GroupElement& g) {
  const LieContext& ctx = sys.ctx();
  const int gd = ctx.dim(), a = ctx.dim_a(), b = ctx.dim_b();
  auto bg = ctx.basis_g();
  Matrix m(a + b, gd);
  Vector rhs(a + b);
  for (int k = 0; k < gd; ++k) {
    DualVector sk = ctx.dual(bg[k]);
    DualVector c2 = ctx.project_b0(ctx.coad_Ad(g, sk));
    DualVector c3 = ctx.project_a0(sk);
    for (int i = 0; i < a; ++i)
      m(i, k) = ctx.eval(c2, AlgebraVector{ctx.basis_a()[i]});
    for (int i = 0; i < b; ++i)
      m(a + i, k) = ctx.eval(c3, AlgebraVector{ctx.basis_b()[i]});
  }
  for (int i = 0; i < a; ++i)
    rhs(i) = ctx.eval(sys.mu(), AlgebraVector{ctx.basis_a()[i]});
  for (int i = 0; i < b; ++i)
    rhs(a + i) = ctx.eval(sys.nu(), AlgebraVector{ctx.basis_b()[i]});
  Vector c = m.colPivHouseholderQr().solve(rhs);
  if ((m * c - rhs).norm() > 1e-9 * (1 + rhs.norm()))
    throw std::runtime_error(
        "solve_sigma: level-set conditions are degenerate at this g");
  return ctx.dual(ctx.from_algebra_coords(c));
}

ExtendedPoint sample_primary(const AKSSystem& sys, std::uint64_t seed,
                             bool on_secondary) {
  const LieContext& ctx = sys.ctx();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const int n = ctx.n();

  Matrix x = Matrix::Zero(n, n);
  for (const Matrix& bk : ctx.basis_g()) x += 0.15 * dist(rng) * bk;
  GroupElement g = ctx.group(matrix_exp(x));
  DualVector sigma = solve_sigma(sys, g);
  AlgebraVector J = ctx.sharp(sigma);

  const auto random_in = [&](const std::vector<Matrix>& basis) {
    Matrix out = Matrix::Zero(n, n);
    for (const Matrix& bk : basis) out += dist(rng) * bk;
    return AlgebraVector{out};
  };
  const auto random_in_span = [&](const std::vector<AlgebraVector>& span) {
    Matrix out = Matrix::Zero(n, n);
    for (const auto& v : span) out += dist(rng) * v.rep;
    return AlgebraVector{out};
  };

  AlgebraVector alpha, beta;
  if (on_secondary) {
    alpha = random_in_span(isotropy_subalgebra(sys, IsotropySide::AMu));
    beta = random_in_span(isotropy_subalgebra(sys, IsotropySide::BNu));
    if (alpha.rep.size() == 0) alpha.rep = Matrix::Zero(n, n);
    if (beta.rep.size() == 0) beta.rep = Matrix::Zero(n, n);
  } else {
    alpha = random_in(ctx.basis_a());
    beta = random_in(ctx.basis_b());
  }
  return make_extended_point(ctx, std::move(g), std::move(J),
                             std::move(alpha), std::move(beta),
                             std::move(sigma));
}

GnhReport run_gnh(const AKSSystem& sys,
                  const std::vector<ExtendedPoint>& samples, bool verify_fd) {
  const LieContext& ctx = sys.ctx();
  GnhReport report;
  bool any_secondary = false;
  bool secondary_stable = true;

  for (const ExtendedPoint& l : samples) {
    GnhSampleDiagnostics d;
    auto cons = primary_constraints(sys, l);
    for (int i = 0; i < 3; ++i) d.primary_residuals[i] = cons[i].rep.norm();
    const double pres =
        d.primary_residuals[0] + d.primary_residuals[1] + d.primary_residuals[2];
    d.on_primary = pres <= 1e-8;

    auto kernel = kernel_omega0(ctx, l);
    d.kernel_dim = static_cast<int>(kernel.size());
    for (const auto& X : kernel)
      d.kernel_char_residual = std::max(
          d.kernel_char_residual, X.xi.rep.norm() + X.dsigma.rep.norm());

    if (d.on_primary) {
      Matrix om = omega0_matrix(ctx, l);
      Matrix j1 = primary_jacobian(sys, l);
      Subspace t1 = nullspace(j1);
      Subspace perp1 = nullspace(t1.basis.transpose() * om);
      d.perp1_dim = perp1.dim();

      Matrix j2s = secondary_jacobian(sys);
      Matrix j2(j1.rows() + j2s.rows(), j1.cols());
      j2 << j1, j2s;
      Subspace t2 = nullspace(j2);
      Subspace perp2 = nullspace(t2.basis.transpose() * om);
      d.perp2_dim = perp2.dim();
      d.perp_spaces_equal = same_subspace(perp1, perp2);

      Subspace ker = nullspace(om);
      d.dim_audit_lhs = d.perp1_dim;
      d.dim_audit_rhs =
          tangent_dim(ctx) - t1.dim() + intersection_dim(ker, t1);

      double smax = 0, fdmax = 0;
      for (const Matrix& kap : ctx.basis_a()) {
        StabilityFdCheck fd;
        auto [s2, s3] = stability_derivatives(
            sys, l, AlgebraVector{kap},
            AlgebraVector{Matrix::Zero(ctx.n(), ctx.n())},
            verify_fd ? &fd : nullptr);
        (void)s3;
        smax = std::max(smax, std::abs(s2));
        if (verify_fd) fdmax = std::max(fdmax, fd.residual2);
      }
      for (const Matrix& om_b : ctx.basis_b()) {
        StabilityFdCheck fd;
        auto [s2, s3] = stability_derivatives(
            sys, l, AlgebraVector{Matrix::Zero(ctx.n(), ctx.n())},
            AlgebraVector{om_b}, verify_fd ? &fd : nullptr);
        (void)s2;
        smax = std::max(smax, std::abs(s3));
        if (verify_fd) fdmax = std::max(fdmax, fd.residual3);
      }
      d.stability_max = smax;
      d.stability_fd_residual = fdmax;

      d.secondary_alpha_dist = subspace_distance(
          ctx, l.alpha, isotropy_subalgebra(sys, IsotropySide::AMu));
      d.secondary_beta_dist = subspace_distance(
          ctx, l.beta, isotropy_subalgebra(sys, IsotropySide::BNu));
      d.on_secondary = d.secondary_alpha_dist <= 1e-9 &&
                       d.secondary_beta_dist <= 1e-9;
      if (d.on_secondary) {
        any_secondary = true;
        if (d.stability_max > 1e-9) secondary_stable = false;
      }
    }
    report.samples.push_back(d);
  }
  report.terminated = any_secondary && secondary_stable;
  return report;
}

}  // namespace aks
