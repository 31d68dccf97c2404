#include "aks/check_battery.hpp"

#include <cmath>
#include <random>

#include "aks/constraint_gnh.hpp"
#include "aks/geometry_verify.hpp"
#include "aks/reduced_dynamics.hpp"

namespace aks {

namespace {

Matrix random_algebra(const LieContext& ctx, std::mt19937_64& rng,
                      double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix x = Matrix::Zero(ctx.n(), ctx.n());
  for (const Matrix& bk : ctx.basis_g()) x += dist(rng) * bk;
  return x;
}

double tangent_norm(const PhaseTangent& t) {
  return t.xi.rep.norm() + t.eta.rep.norm();
}

CheckResult check_structure(const AKSSystem& sys, const CheckOptions& opts) {
  const LieContext& ctx = sys.ctx();
  CheckResult r{"structure_invariants", 0, 0, false, ""};
  ContextValidation val = validate_context(ctx);
  double worst = std::max({val.closure_a, val.closure_b,
                           val.direct_sum_defect, val.projector_residual,
                           val.ad_invariance});
  if (val.pairing_gram_min_sv < 1e-10) worst = std::max(worst, 1.0);
  std::mt19937_64 rng(opts.seed ^ 0x5741u);
  const int m = std::max(20, opts.trials);
  for (int k = 0; k < m; ++k) {
    Matrix x = random_algebra(ctx, rng, 1.0);
    const double nx = 1 + x.norm();
    worst = std::max(worst, (ctx.proj_a(x) + ctx.proj_b(x) - x).norm() / nx);
    worst = std::max(worst, ctx.proj_a(ctx.proj_b(x)).norm() / nx);
    // ad♯_ξ ξ♭ = 0: the standing hypothesis behind conservation
    AlgebraVector xi{x};
    worst = std::max(
        worst, ctx.coad_ad(xi, ctx.flat(xi)).rep.norm() / (nx * nx));
    // dual projections split every functional
    DualVector phi = ctx.dual(random_algebra(ctx, rng, 1.0));
    worst = std::max(worst,
                     (ctx.project_a0(phi).rep + ctx.project_b0(phi).rep -
                      phi.rep).norm() / (1 + phi.rep.norm()));
  }
  r.samples = m;
  r.max_residual = worst;
  r.pass = worst <= 1e-12;
  return r;
}

CheckResult check_factorization(const AKSSystem& sys,
                                const CheckOptions& opts) {
  const LieContext& ctx = sys.ctx();
  CheckResult r{"factorization_residual", 0, 0, false, ""};
  std::mt19937_64 rng(opts.seed ^ 0xFAC7u);
  const int m = std::max(20, opts.trials);
  double worst = 0;
  bool ok = true;
  for (int k = 0; k < m; ++k) {
    GroupElement g = ctx.group(matrix_exp(random_algebra(ctx, rng, 0.3)));
    Factors f = factorize(ctx, g);
    const double remul =
        (f.a.rep * f.b.rep - g.rep).norm() / (1 + g.rep.norm());
    const double member = ctx.proj_b(matrix_log(f.a.rep)).norm() +
                          ctx.proj_a(matrix_log(f.b.rep)).norm();
    worst = std::max({worst, remul, member});
    if (remul > 1e-10 || member > 1e-9) ok = false;
    if (ctx.splitting_kind() != SplittingKind::Custom) {
      Factors fn = factorize_newton(ctx, g);
      const double diff =
          (fn.a.rep - f.a.rep).norm() + (fn.b.rep - f.b.rep).norm();
      worst = std::max(worst, diff);
      if (diff > 1e-9) ok = false;
    }
  }
  r.samples = m;
  r.max_residual = worst;
  r.pass = ok;
  return r;
}

CheckResult check_conservation(const AKSSystem& sys,
                               const CheckOptions& opts) {
  CheckResult r{"flow_conservation", 0, 0, false, ""};
  PhasePoint p0 = canonical_seed(sys);
  const double h0 = hamiltonian(sys.ctx(), p0);
  const int m = std::max(20, opts.trials);
  double worst = 0;
  for (int k = 0; k <= m; ++k) {
    const double t = opts.t_end * k / m;
    PhasePoint pt = unreduced_flow(sys.ctx(), p0, t);
    worst = std::max(worst, constraint_residual(sys, pt));
    worst = std::max(worst, std::abs(hamiltonian(sys.ctx(), pt) - h0));
  }
  r.samples = m + 1;
  r.max_residual = worst;
  r.pass = worst <= 1e-9;
  return r;
}

CheckResult check_equivalence(const AKSSystem& sys, const CheckOptions& opts) {
  CheckResult r{"reduced_equivalence", 0, 0, false, ""};
  TrajectoryComparison cmp =
      compare_trajectories(sys, canonical_seed(sys), opts.t_end, opts.h);
  r.samples = static_cast<int>(cmp.per_time.size());
  r.max_residual = cmp.sup_deviation;
  const bool order_ok =
      cmp.sup_deviation < 1e-14 ||
      (cmp.order_estimate >= 3.7 && cmp.order_estimate <= 4.3);
  r.pass = cmp.sup_deviation <= 1e-6 && order_ok;
  return r;
}

CheckResult check_isospectral(const AKSSystem& sys, const CheckOptions& opts) {
  CheckResult r{"isospectrality", 0, 0, false, ""};
  PhasePoint p0 = canonical_seed(sys);
  const int m = std::max(20, opts.trials);
  std::vector<double> ts;
  for (int k = 0; k <= m; ++k) ts.push_back(opts.t_end * k / m);
  auto orbit = reduced_flow_by_factorization(sys, p0, ts);
  const LieContext& ctx = sys.ctx();
  auto ref = spectrum(ctx.sharp(orbit[0].omega1).rep +
                      ctx.sharp(orbit[0].omega2).rep);
  double worst = 0;
  for (const auto& o : orbit) {
    auto sp = spectrum(ctx.sharp(o.omega1).rep + ctx.sharp(o.omega2).rep);
    for (std::size_t i = 0; i < sp.size(); ++i)
      worst = std::max(worst, std::hypot(sp[i].first - ref[i].first,
                                         sp[i].second - ref[i].second));
  }
  r.samples = m + 1;
  r.max_residual = worst;
  r.pass = worst <= 1e-8;
  return r;
}

CheckResult check_pullback(const AKSSystem& sys, const CheckOptions& opts) {
  CheckResult r{"pullback_identity", 0, 0, false, ""};
  const int points = 5;
  const int trials = std::max(10, opts.trials / 2);
  double worst = 0;
  for (int k = 0; k < points; ++k) {
    PhasePoint p = random_level_set_point(sys, opts.seed + 101 * k);
    worst = std::max(worst, pullback_check(sys, p, trials,
                                           opts.seed ^ (0x9E3779B9u * k),
                                           opts.break_sign));
  }
  r.samples = points * trials;
  r.max_residual = worst;
  r.pass = worst <= 1e-9;
  return r;
}

CheckResult check_gnh(const AKSSystem& sys, const CheckOptions& opts) {
  CheckResult r{"gnh_cascade", 0, 0, false, ""};
  const int g = sys.ctx().dim();
  std::vector<ExtendedPoint> samples;
  for (int k = 0; k < 3; ++k)
    samples.push_back(sample_primary(sys, opts.seed + 7 * k, false));
  for (int k = 0; k < 3; ++k)
    samples.push_back(sample_primary(sys, opts.seed + 7 * k + 3, true));
  GnhReport rep = run_gnh(sys, samples, opts.verify_fd);
  double worst = 0;
  bool ok = rep.terminated;
  for (const auto& d : rep.samples) {
    if (!d.on_primary || d.kernel_dim != 2 * g || d.perp1_dim != 3 * g ||
        d.dim_audit_lhs != d.dim_audit_rhs || !d.perp_spaces_equal)
      ok = false;
    worst = std::max(worst, d.kernel_char_residual);
    if (opts.verify_fd) {
      worst = std::max(worst, d.stability_fd_residual);
      if (d.stability_fd_residual > 1e-6) ok = false;
    }
    if (d.on_secondary && d.stability_max > 1e-9) ok = false;
  }
  r.samples = static_cast<int>(rep.samples.size());
  r.max_residual = worst;
  r.pass = ok;
  return r;
}

CheckResult check_kernel(const AKSSystem& sys, const CheckOptions& opts) {
  CheckResult r{"kernel_directions", 0, 0, false, ""};
  const int points = 3;
  double worst = 0;
  bool ok = true;
  int count = 0;
  const int expected_kernel =
      static_cast<int>(isotropy_subalgebra(sys, IsotropySide::AMu).size() +
                       isotropy_subalgebra(sys, IsotropySide::BNu).size());
  for (int k = 0; k < points; ++k) {
    PhasePoint p = random_level_set_point(sys, opts.seed + 31 * k + 1);
    auto dirs = kernel_directions(sys, p);
    auto basis = lambda_tangent_basis(sys, p);
    const double scale = 1 + p.sigma.rep.norm();
    for (const auto& d : dirs) {
      ++count;
      const double tang = lambda_tangency_residual(sys, p, d);
      worst = std::max(worst, tang / scale);
      if (tang > 1e-9 * scale) ok = false;
      for (const auto& b : basis) {
        const double w = std::abs(canonical_form(sys.ctx(), p, d, b));
        const double s = scale * (1 + tangent_norm(d)) * (1 + tangent_norm(b));
        worst = std::max(worst, w / s);
        if (w > 1e-9 * s) ok = false;
      }
    }
    if (restricted_form_kernel_dim(sys, p) != expected_kernel) ok = false;
    // the directions are the generators of the lifted two-sided action
    for (const auto& kap : isotropy_subalgebra(sys, IsotropySide::AMu)) {
      PhaseTangent fd = lifted_action_generator(
          sys, p, kap, AlgebraVector{Matrix::Zero(sys.ctx().n(), sys.ctx().n())});
      PhaseTangent an;
      an.xi.rep = p.g.rep.inverse() * kap.rep * p.g.rep;
      an.eta.rep = Matrix::Zero(sys.ctx().n(), sys.ctx().n());
      const double diff = (fd.xi.rep - an.xi.rep).norm() +
                          (fd.eta.rep - an.eta.rep).norm();
      worst = std::max(worst, diff);
      if (diff > 1e-6) ok = false;
    }
    for (const auto& om : isotropy_subalgebra(sys, IsotropySide::BNu)) {
      PhaseTangent fd = lifted_action_generator(
          sys, p, AlgebraVector{Matrix::Zero(sys.ctx().n(), sys.ctx().n())}, om);
      PhaseTangent an;
      an.xi.rep = -om.rep;
      an.eta.rep = om.rep * p.sigma.rep - p.sigma.rep * om.rep;
      const double diff = (fd.xi.rep - an.xi.rep).norm() +
                          (fd.eta.rep - an.eta.rep).norm();
      worst = std::max(worst, diff);
      if (diff > 1e-6) ok = false;
    }
  }
  r.samples = count;
  r.max_residual = worst;
  r.pass = ok;
  return r;
}

CheckResult check_descent(const AKSSystem& sys, const CheckOptions& opts) {
  CheckResult r{"hamiltonian_descent", 0, 0, false, ""};
  const int m = std::max(20, opts.trials);
  double worst = 0;
  for (int k = 0; k < m; ++k) {
    PhasePoint p = random_level_set_point(sys, opts.seed + 977 * k + 5);
    const double h = hamiltonian(sys.ctx(), p);
    const double hr = reduced_hamiltonian(sys.ctx(), L_map(sys, p));
    worst = std::max(worst, std::abs(h - hr) / (1 + std::abs(h)));
  }
  r.samples = m;
  r.max_residual = worst;
  r.pass = worst <= 1e-10;
  return r;
}

}  // namespace

std::vector<std::string> check_names() {
  return {"structure_invariants", "factorization_residual",
          "flow_conservation",    "reduced_equivalence",
          "isospectrality",       "pullback_identity",
          "gnh_cascade",          "kernel_directions",
          "hamiltonian_descent"};
}

std::vector<CheckResult> run_checks(const AKSSystem& sys,
                                    const CheckOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(check_structure(sys, opts));
  out.push_back(check_factorization(sys, opts));
  out.push_back(check_conservation(sys, opts));
  out.push_back(check_equivalence(sys, opts));
  out.push_back(check_isospectral(sys, opts));
  out.push_back(check_pullback(sys, opts));
  out.push_back(check_gnh(sys, opts));
  out.push_back(check_kernel(sys, opts));
  out.push_back(check_descent(sys, opts));
  return out;
}

PhasePoint random_level_set_point(const AKSSystem& sys, std::uint64_t seed) {
  const LieContext& ctx = sys.ctx();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.15);
  Matrix x = Matrix::Zero(ctx.n(), ctx.n());
  for (const Matrix& bk : ctx.basis_g()) x += dist(rng) * bk;
  GroupElement g = ctx.group(matrix_exp(x));
  DualVector sigma = solve_sigma(sys, g);
  return PhasePoint{std::move(g), std::move(sigma)};
}

}  // namespace aks
