#include "aks/aks_system.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

namespace aks {

AKSSystem::AKSSystem(LieContext ctx, DualVector mu, DualVector nu)
    : ctx_(std::move(ctx)), mu_(std::move(mu)), nu_(std::move(nu)) {
  const double ra = ctx_.project_a0(mu_).rep.norm();
  const double rb = ctx_.project_b0(nu_).rep.norm();
  if (ra > 1e-12 * (1 + mu_.rep.norm()))
    throw std::invalid_argument("mu must lie in the annihilator of b");
  if (rb > 1e-12 * (1 + nu_.rep.norm()))
    throw std::invalid_argument("nu must lie in the annihilator of a");
}

std::pair<DualVector, DualVector> momentum_map(const LieContext& ctx,
                                               const PhasePoint& p) {
  return {ctx.project_b0(ctx.coad_Ad(p.g, p.sigma)),
          ctx.project_a0(p.sigma)};
}

double constraint_residual(const AKSSystem& sys, const PhasePoint& p) {
  auto [jb, ja] = momentum_map(sys.ctx(), p);
  return (jb.rep - sys.mu().rep).norm() + (ja.rep - sys.nu().rep).norm();
}

double hamiltonian(const LieContext& ctx, const PhasePoint& p) {
  (void)ctx;
  return 0.5 * (p.sigma.rep * p.sigma.rep).trace();
}

PhasePoint unreduced_flow(const LieContext& ctx, const PhasePoint& p0,
                          double t) {
  Matrix g = p0.g.rep * matrix_exp((t * ctx.sharp(p0.sigma).rep).eval());
  return PhasePoint{ctx.group(std::move(g)), p0.sigma};
}

OrbitPoint L_map(const AKSSystem& sys, const PhasePoint& p, double tol) {
  const double res = constraint_residual(sys, p);
  if (res > tol) throw OffLevelSet(res);
  const LieContext& ctx = sys.ctx();
  Factors f = factorize(ctx, p.g);
  GroupElement ga_inv = ctx.group(f.a.rep.inverse());
  DualVector w1 = ctx.project_b0(ctx.coad_Ad(ga_inv, sys.mu()));
  DualVector w2 = ctx.project_a0(ctx.coad_Ad(f.b, sys.nu()));
  // The second displayed formula must agree; it is the content of the
  // reduction argument and is kept as a permanent runtime assertion.
  DualVector sb = ctx.coad_Ad(f.b, p.sigma);
  const double alt = (ctx.project_b0(sb).rep - w1.rep).norm() +
                     (ctx.project_a0(sb).rep - w2.rep).norm();
  if (alt > 1e-9 * (1 + p.sigma.rep.norm()))
    throw std::runtime_error("L_map: the two defining formulas disagree, "
                             "residual " + std::to_string(alt));
  return OrbitPoint{std::move(w1), std::move(w2)};
}

double reduced_hamiltonian(const LieContext& ctx, const OrbitPoint& o) {
  const Matrix& w1 = o.omega1.rep;
  const Matrix& w2 = o.omega2.rep;
  (void)ctx;
  return 0.5 * (w1 * w1).trace() + 0.5 * (w2 * w2).trace() +
         (w1 * w2).trace();
}

std::vector<OrbitPoint> reduced_flow_by_factorization(
    const AKSSystem& sys, const PhasePoint& p0, const std::vector<double>& ts) {
  std::vector<OrbitPoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    PhasePoint pt = unreduced_flow(sys.ctx(), p0, t);
    try {
      out.push_back(L_map(sys, pt));
    } catch (const NotFactorizable& e) {
      throw NotFactorizable(e.minor_index, t);
    }
  }
  return out;
}

std::vector<AlgebraVector> isotropy_subalgebra(const AKSSystem& sys,
                                               IsotropySide side) {
  const LieContext& ctx = sys.ctx();
  const auto& basis =
      side == IsotropySide::AMu ? ctx.basis_a() : ctx.basis_b();
  const DualVector& target =
      side == IsotropySide::AMu ? sys.mu() : sys.nu();
  const int n = ctx.n(), m = static_cast<int>(basis.size());
  Matrix map(n * n, m);
  for (int k = 0; k < m; ++k) {
    DualVector d = ctx.coad_ad(AlgebraVector{basis[k]}, target);
    DualVector pr = side == IsotropySide::AMu ? ctx.project_b0(d)
                                              : ctx.project_a0(d);
    map.col(k) = Eigen::Map<const Vector>(pr.rep.data(), n * n);
  }
  Eigen::JacobiSVD<Matrix> svd(map, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh =
      (sv.size() > 0 && sv(0) > 0) ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  std::vector<AlgebraVector> out;
  for (int k = rank; k < m; ++k) {
    Matrix v = Matrix::Zero(n, n);
    for (int j = 0; j < m; ++j) v += svd.matrixV()(j, k) * basis[j];
    out.push_back(AlgebraVector{v});
  }
  return out;
}

std::vector<std::pair<double, double>> spectrum(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < m.rows(); ++i)
    out.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
  std::sort(out.begin(), out.end());
  return out;
}

PhasePoint canonical_seed(const AKSSystem& sys) {
  return PhasePoint{sys.ctx().identity(),
                    sys.ctx().dual(sys.mu().rep + sys.nu().rep)};
}

AKSSystem toda_preset(int n) {
  LieContext ctx = LieContext::qr_iwasawa(n, AlgebraKind::Sl);
  Matrix jacobi = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) jacobi(i, i + 1) = jacobi(i + 1, i) = 1.0;
  DualVector mu = ctx.dual(Matrix::Zero(n, n));
  DualVector nu = ctx.project_a0(ctx.flat(ctx.algebra(jacobi)));
  return AKSSystem(std::move(ctx), std::move(mu), std::move(nu));
}

AKSSystem gl_lu_preset(int n, std::uint64_t seed) {
  LieContext ctx = LieContext::lu_gauss(n, AlgebraKind::Gl);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.3);
  Matrix raw1(n, n), raw2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) raw1(i, j) = dist(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) raw2(i, j) = dist(rng);
  DualVector mu = ctx.project_b0(ctx.dual(raw1));
  DualVector nu = ctx.project_a0(ctx.dual(raw2));
  return AKSSystem(std::move(ctx), std::move(mu), std::move(nu));
}

}  // namespace aks
