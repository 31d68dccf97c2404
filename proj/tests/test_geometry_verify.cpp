#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "aks/check_battery.hpp"
#include "aks/geometry_verify.hpp"
#include "aks/reduced_dynamics.hpp"
#include "doctest.h"

using namespace aks;

namespace {

PhaseTangent random_phase_tangent(const LieContext& ctx,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  const auto rand_g = [&]() {
    Matrix x = Matrix::Zero(ctx.n(), ctx.n());
    for (const Matrix& b : ctx.basis_g()) x += dist(rng) * b;
    return x;
  };
  PhaseTangent t;
  t.xi.rep = rand_g();
  t.eta.rep = rand_g();
  return t;
}

PhasePoint step_phase(const LieContext& ctx, const PhasePoint& p,
                      const PhaseTangent& X, double t) {
  return PhasePoint{
      ctx.group(p.g.rep * matrix_exp((t * X.xi.rep).eval())),
      DualVector{p.sigma.rep + t * X.eta.rep}};
}

}  // namespace

TEST_CASE("canonical form: degenerate arguments") {
  AKSSystem sys = toda_preset(2);
  PhasePoint p = canonical_seed(sys);
  std::mt19937_64 rng(51);
  PhaseTangent X = random_phase_tangent(sys.ctx(), rng);
  CHECK(canonical_form(sys.ctx(), p, X, X) == 0.0);
  PhaseTangent F1 = X, F2 = random_phase_tangent(sys.ctx(), rng);
  F1.xi.rep.setZero();
  F2.xi.rep.setZero();
  CHECK(canonical_form(sys.ctx(), p, F1, F2) == 0.0);
}

TEST_CASE("canonical form is closed: discrete exterior derivative") {
  // left-invariant extensions of constant (ξ, η) have bracket ([ξ1,ξ2], 0);
  // dω(X,Y,Z) = Xω(Y,Z) − Yω(X,Z) + Zω(X,Y)
  //           − ω([X,Y],Z) + ω([X,Z],Y) − ω([Y,Z],X)
  AKSSystem sys = gl_lu_preset(2, 52);
  const LieContext& ctx = sys.ctx();
  PhasePoint p = canonical_seed(sys);
  std::mt19937_64 rng(53);
  const double h = 1e-5;
  for (int trial = 0; trial < 10; ++trial) {
    PhaseTangent X = random_phase_tangent(ctx, rng);
    PhaseTangent Y = random_phase_tangent(ctx, rng);
    PhaseTangent Z = random_phase_tangent(ctx, rng);
    const auto deriv = [&](const PhaseTangent& along, const PhaseTangent& u,
                           const PhaseTangent& v) {
      return (canonical_form(ctx, step_phase(ctx, p, along, h), u, v) -
              canonical_form(ctx, step_phase(ctx, p, along, -h), u, v)) /
             (2 * h);
    };
    const auto lie = [&](const PhaseTangent& u, const PhaseTangent& v) {
      PhaseTangent w;
      w.xi.rep = u.xi.rep * v.xi.rep - v.xi.rep * u.xi.rep;
      w.eta.rep = Matrix::Zero(ctx.n(), ctx.n());
      return w;
    };
    const double d3 = deriv(X, Y, Z) - deriv(Y, X, Z) + deriv(Z, X, Y) -
                      canonical_form(ctx, p, lie(X, Y), Z) +
                      canonical_form(ctx, p, lie(X, Z), Y) -
                      canonical_form(ctx, p, lie(Y, Z), X);
    CHECK(std::abs(d3) < 1e-6);
  }
}

TEST_CASE("lambda tangent basis: dimension and direct substitution") {
  AKSSystem sys = gl_lu_preset(2, 54);
  PhasePoint p = canonical_seed(sys);
  auto basis = lambda_tangent_basis(sys, p);
  CHECK(static_cast<int>(basis.size()) == sys.ctx().dim());
  for (const auto& t : basis)
    CHECK(lambda_tangency_residual(sys, p, t) < 1e-10);
  // at g = e the first condition is π_{𝔟⁰}(ad♯_ξ σ + η) = 0 verbatim
  const LieContext& ctx = sys.ctx();
  for (const auto& t : basis) {
    DualVector inner{t.eta.rep + t.xi.rep * p.sigma.rep -
                     p.sigma.rep * t.xi.rep};
    CHECK(ctx.project_b0(inner).rep.norm() < 1e-10);
    CHECK(ctx.project_a0(t.eta).rep.norm() < 1e-10);
  }
}

TEST_CASE("lambda tangents leave the level set only at second order") {
  AKSSystem sys = gl_lu_preset(2, 55);
  PhasePoint p = random_level_set_point(sys, 56);
  auto basis = lambda_tangent_basis(sys, p);
  const double h1 = 1e-4, h2 = 1e-5;
  for (const auto& t : basis) {
    const double r1 = constraint_residual(sys, step_phase(sys.ctx(), p, t, h1));
    const double r2 = constraint_residual(sys, step_phase(sys.ctx(), p, t, h2));
    CHECK(r1 < 50 * h1 * h1);
    CHECK(r2 < 50 * h2 * h2);
  }
}

TEST_CASE("M_derivative: zero tangent, finite differences, field identity") {
  AKSSystem sys = gl_lu_preset(3, 57);
  PhasePoint p = random_level_set_point(sys, 58);
  const LieContext& ctx = sys.ctx();

  PhaseTangent zero;
  zero.xi.rep = Matrix::Zero(3, 3);
  zero.eta.rep = Matrix::Zero(3, 3);
  auto [z1, z2] = M_derivative(sys, p, zero);
  CHECK(z1.rep.norm() < 1e-14);
  CHECK(z2.rep.norm() < 1e-14);

  auto basis = lambda_tangent_basis(sys, p);
  const double h = 1e-6;
  for (std::size_t k = 0; k < basis.size(); k += 2) {
    const PhaseTangent& v = basis[k];
    auto [d1, d2] = M_derivative(sys, p, v);
    OrbitPoint op = L_map(sys, step_phase(ctx, p, v, h), 1e-6);
    OrbitPoint om = L_map(sys, step_phase(ctx, p, v, -h), 1e-6);
    Matrix fd1 = (op.omega1.rep - om.omega1.rep) / (2 * h);
    Matrix fd2 = (op.omega2.rep - om.omega2.rep) / (2 * h);
    CHECK((fd1 - d1.rep).norm() < 1e-5);
    CHECK((fd2 - d2.rep).norm() < 1e-5);
  }

  // pushing forward the unreduced velocity (σ♯, 0) gives the reduced field
  PhaseTangent flow;
  flow.xi.rep = ctx.sharp(p.sigma).rep;
  flow.eta.rep = Matrix::Zero(3, 3);
  auto [f1, f2] = M_derivative(sys, p, flow);
  auto [r1, r2] = reduced_vector_field(ctx, L_map(sys, p));
  CHECK((f1.rep - r1.rep).norm() < 1e-9);
  CHECK((f2.rep - r2.rep).norm() < 1e-9);
}

TEST_CASE("kks form: degenerate arguments and isotropy generators") {
  AKSSystem sys = gl_lu_preset(2, 59);
  const LieContext& ctx = sys.ctx();
  OrbitPoint o = L_map(sys, canonical_seed(sys));
  std::mt19937_64 rng(60);
  std::normal_distribution<double> dist(0.0, 1.0);
  OrbitTangentGens U;
  U.xi.rep = ctx.proj_a(Matrix::Random(2, 2));
  U.zeta.rep = ctx.proj_b(Matrix::Random(2, 2));
  CHECK(kks_form(ctx, o, U, U) == 0.0);
}

TEST_CASE("pullback identity and its negative control") {
  for (const AKSSystem& sys : {toda_preset(3), gl_lu_preset(2, 61)}) {
    PhasePoint p = random_level_set_point(sys, 62);
    CHECK(pullback_check(sys, p, 50, 63) < 1e-9);
    CHECK(pullback_check(sys, p, 50, 63, true) > 1e-2);
  }
}

TEST_CASE("kernel directions: tangency, isotropy and orthogonality") {
  AKSSystem sys = gl_lu_preset(2, 64);
  PhasePoint p = random_level_set_point(sys, 65);
  auto dirs = kernel_directions(sys, p);
  auto basis = lambda_tangent_basis(sys, p);
  const double scale = 1 + p.sigma.rep.norm();
  for (const auto& d : dirs) {
    CHECK(lambda_tangency_residual(sys, p, d) < 1e-9 * scale);
    for (const auto& b : basis)
      CHECK(std::abs(canonical_form(sys.ctx(), p, d, b)) <
            1e-9 * scale * (1 + b.xi.rep.norm() + b.eta.rep.norm()) *
                (1 + d.xi.rep.norm() + d.eta.rep.norm()));
  }
  const int expected =
      static_cast<int>(isotropy_subalgebra(sys, IsotropySide::AMu).size() +
                       isotropy_subalgebra(sys, IsotropySide::BNu).size());
  CHECK(restricted_form_kernel_dim(sys, p) == expected);
}

TEST_CASE("zero momentum values stabilize everything") {
  LieContext ctx = LieContext::lu_gauss(2, AlgebraKind::Gl);
  AKSSystem sys(ctx, ctx.dual(Matrix::Zero(2, 2)),
                ctx.dual(Matrix::Zero(2, 2)));
  CHECK(isotropy_subalgebra(sys, IsotropySide::AMu).size() ==
        static_cast<std::size_t>(ctx.dim_a()));
  CHECK(isotropy_subalgebra(sys, IsotropySide::BNu).size() ==
        static_cast<std::size_t>(ctx.dim_b()));
  PhasePoint p = canonical_seed(sys);  // σ = 0
  CHECK(restricted_form_kernel_dim(sys, p) == ctx.dim());
}

TEST_CASE("lifted action lemma: X(kappa, omega) matches the fd generator") {
  AKSSystem sys = gl_lu_preset(2, 66);
  PhasePoint p = random_level_set_point(sys, 67);
  const LieContext& ctx = sys.ctx();
  for (const auto& kap : isotropy_subalgebra(sys, IsotropySide::AMu))
    for (const auto& om : isotropy_subalgebra(sys, IsotropySide::BNu)) {
      PhaseTangent fd = lifted_action_generator(sys, p, kap, om);
      PhaseTangent an;
      an.xi.rep = p.g.rep.inverse() * kap.rep * p.g.rep - om.rep;
      an.eta.rep = om.rep * p.sigma.rep - p.sigma.rep * om.rep;
      CHECK((fd.xi.rep - an.xi.rep).norm() < 1e-6);
      CHECK((fd.eta.rep - an.eta.rep).norm() < 1e-6);
    }
}

TEST_CASE("off level set points are rejected") {
  AKSSystem sys = toda_preset(2);
  PhasePoint p = canonical_seed(sys);
  p.sigma.rep += (Matrix(2, 2) << 0, 0.5, 0.5, 0).finished();
  CHECK_THROWS_AS(lambda_tangent_basis(sys, p), OffLevelSet);
  CHECK_THROWS_AS(kernel_directions(sys, p), OffLevelSet);
}
