#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "aks/factorization.hpp"
#include "aks/lie_context.hpp"
#include "doctest.h"

using namespace aks;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
  return m;
}

Matrix random_in(std::mt19937_64& rng, const LieContext& ctx) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix x = Matrix::Zero(ctx.n(), ctx.n());
  for (const Matrix& b : ctx.basis_g()) x += dist(rng) * b;
  return x;
}

}  // namespace

TEST_CASE("context dimensions and validation") {
  {
    LieContext ctx = LieContext::qr_iwasawa(3, AlgebraKind::Gl);
    CHECK(ctx.dim() == 9);
    CHECK(ctx.dim_a() == 3);
    CHECK(ctx.dim_b() == 6);
    CHECK(validate_context(ctx).ok());
  }
  {
    LieContext ctx = LieContext::qr_iwasawa(3, AlgebraKind::Sl);
    CHECK(ctx.dim() == 8);
    CHECK(ctx.dim_a() == 3);
    CHECK(ctx.dim_b() == 5);
    CHECK(validate_context(ctx).ok());
  }
  {
    LieContext ctx = LieContext::lu_gauss(3, AlgebraKind::Gl);
    CHECK(ctx.dim() == 9);
    CHECK(ctx.dim_a() == 3);
    CHECK(ctx.dim_b() == 6);
    CHECK(validate_context(ctx).ok());
  }
}

TEST_CASE("qr projections match the closed-form skew/upper split") {
  LieContext ctx = LieContext::qr_iwasawa(4, AlgebraKind::Gl);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    Matrix x = random_matrix(rng, 4);
    // unique decomposition x = skew + upper: skew part from the strictly
    // lower triangle, mirrored
    Matrix skew = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < i; ++j) {
        skew(i, j) = x(i, j);
        skew(j, i) = -x(i, j);
      }
    CHECK((ctx.proj_a(x) - skew).norm() < 1e-12);
    CHECK((ctx.proj_b(x) - (x - skew)).norm() < 1e-12);
  }
}

TEST_CASE("lu projections match the strict-lower/upper split") {
  LieContext ctx = LieContext::lu_gauss(4, AlgebraKind::Gl);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    Matrix x = random_matrix(rng, 4);
    Matrix lower = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < i; ++j) lower(i, j) = x(i, j);
    CHECK((ctx.proj_a(x) - lower).norm() < 1e-12);
    CHECK((ctx.proj_b(x) - (x - lower)).norm() < 1e-12);
  }
}

TEST_CASE("pairing, flat and sharp") {
  LieContext ctx = LieContext::qr_iwasawa(3, AlgebraKind::Gl);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    Matrix x = random_matrix(rng, 3), y = random_matrix(rng, 3);
    CHECK(ctx.pair(x, y) == doctest::Approx((x * y).trace()).epsilon(1e-14));
    AlgebraVector xv{x};
    CHECK(ctx.eval(ctx.flat(xv), AlgebraVector{y}) ==
          doctest::Approx((x * y).trace()).epsilon(1e-12));
    CHECK((ctx.sharp(ctx.flat(xv)).rep - x).norm() < 1e-13);
  }
}

TEST_CASE("dual projections satisfy the defining evaluations") {
  for (LieContext ctx : {LieContext::qr_iwasawa(3, AlgebraKind::Sl),
                         LieContext::lu_gauss(3, AlgebraKind::Gl)}) {
    std::mt19937_64 rng(10);
    for (int k = 0; k < 50; ++k) {
      DualVector phi = ctx.dual(random_in(rng, ctx));
      DualVector a0 = ctx.project_a0(phi);
      DualVector b0 = ctx.project_b0(phi);
      for (const Matrix& ai : ctx.basis_a()) {
        CHECK(std::abs(ctx.eval(a0, AlgebraVector{ai})) < 1e-12);
        CHECK(ctx.eval(b0, AlgebraVector{ai}) ==
              doctest::Approx(ctx.eval(phi, AlgebraVector{ai}))
                  .epsilon(1e-11));
      }
      for (const Matrix& bi : ctx.basis_b()) {
        CHECK(std::abs(ctx.eval(b0, AlgebraVector{bi})) < 1e-12);
        CHECK(ctx.eval(a0, AlgebraVector{bi}) ==
              doctest::Approx(ctx.eval(phi, AlgebraVector{bi}))
                  .epsilon(1e-11));
      }
      CHECK((a0.rep + b0.rep - phi.rep).norm() < 1e-12);
    }
  }
}

TEST_CASE("bracket equals the commutator") {
  LieContext ctx = LieContext::lu_gauss(3, AlgebraKind::Gl);
  std::mt19937_64 rng(11);
  Matrix x = random_matrix(rng, 3), y = random_matrix(rng, 3);
  CHECK((ctx.bracket(AlgebraVector{x}, AlgebraVector{y}).rep -
         (x * y - y * x)).norm() < 1e-13);
}

TEST_CASE("coadjoint actions satisfy their defining identities") {
  for (LieContext ctx : {LieContext::qr_iwasawa(3, AlgebraKind::Gl),
                         LieContext::qr_iwasawa(3, AlgebraKind::Sl)}) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 30; ++k) {
      DualVector phi = ctx.dual(random_in(rng, ctx));
      AlgebraVector kap{random_in(rng, ctx)};
      AlgebraVector xi{random_in(rng, ctx)};
      // (ad♯_κ φ)(ξ) = φ([ξ, κ])
      const double lhs = ctx.eval(ctx.coad_ad(kap, phi), xi);
      const double rhs = ctx.eval(phi, ctx.bracket(xi, kap));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
      // (Ad♯_g φ)(ξ) = φ(g⁻¹ ξ g)
      GroupElement g = ctx.group(matrix_exp(0.3 * random_in(rng, ctx)));
      const double lhs2 = ctx.eval(ctx.coad_Ad(g, phi), xi);
      const double rhs2 =
          ctx.eval(phi, AlgebraVector{g.rep.inverse() * xi.rep * g.rep});
      CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-10));
    }
  }
}

TEST_CASE("ad-sharp of an element against its own flat vanishes") {
  for (LieContext ctx : {LieContext::qr_iwasawa(3, AlgebraKind::Sl),
                         LieContext::lu_gauss(4, AlgebraKind::Gl)}) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 100; ++k) {
      AlgebraVector xi{random_in(rng, ctx)};
      CHECK(ctx.coad_ad(xi, ctx.flat(xi)).rep.norm() <
            1e-12 * (1 + xi.rep.squaredNorm()));
    }
  }
}

TEST_CASE("sl constructors enforce tracelessness and unit determinant") {
  LieContext ctx = LieContext::qr_iwasawa(2, AlgebraKind::Sl);
  CHECK_THROWS_AS(ctx.algebra(Matrix::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(ctx.group((2 * Matrix::Identity(2, 2)).eval()),
                  std::invalid_argument);
  CHECK_NOTHROW(ctx.group(Matrix::Identity(2, 2)));
  // dual scrubs the trace component
  DualVector d = ctx.dual((Matrix::Identity(2, 2) +
                           (Matrix(2, 2) << 0, 1, 0, 0).finished()).eval());
  CHECK(std::abs(d.rep.trace()) < 1e-13);
}

TEST_CASE("group constructor rejects singular matrices") {
  LieContext ctx = LieContext::lu_gauss(2, AlgebraKind::Gl);
  CHECK_THROWS_AS(ctx.group(Matrix::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("nondegeneracy witness for a crossed splitting") {
  LieContext ctx = LieContext::lu_gauss(2, AlgebraKind::Gl);
  CHECK(ctx.check_nondegeneracy(ctx.identity()).ok);
  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  NondegeneracyResult res = ctx.check_nondegeneracy(ctx.group(p));
  CHECK(!res.ok);
  CHECK(res.witness.rep.norm() > 1e-6);
  // the witness lies in 𝔟 ∩ Ad_g(𝔞)
  CHECK(ctx.proj_a(res.witness.rep).norm() < 1e-9);
  Matrix pulled = p.inverse() * res.witness.rep * p;
  CHECK(ctx.proj_b(pulled).norm() < 1e-9 * (1 + pulled.norm()));
}

TEST_CASE("custom context reproduces the lu closed-form splitting") {
  LieContext lu = LieContext::lu_gauss(3, AlgebraKind::Gl);
  LieContext ctx =
      LieContext::custom(3, AlgebraKind::Gl, lu.basis_a(), lu.basis_b());
  CHECK(ctx.splitting_kind() == SplittingKind::Custom);
  CHECK(validate_context(ctx).ok());
  std::mt19937_64 rng(14);
  Matrix x = random_matrix(rng, 3);
  CHECK((ctx.proj_a(x) - lu.proj_a(x)).norm() < 1e-12);
}

TEST_CASE("custom context accepts a degenerate pairing restriction") {
  // 𝔞 spanned by a nilpotent direction: the pairing restricted to 𝔞 is
  // identically zero, yet the context is still constructible; the defect
  // shows up in validation, not in the constructor.
  std::vector<Matrix> ba{(Matrix(2, 2) << 0, 1, 0, 0).finished()};
  std::vector<Matrix> bb{(Matrix(2, 2) << 1, 0, 0, 0).finished(),
                         (Matrix(2, 2) << 0, 0, 0, 1).finished(),
                         (Matrix(2, 2) << 0, 0, 1, 0).finished()};
  LieContext ctx = LieContext::custom(2, AlgebraKind::Gl, ba, bb);
  ContextValidation val = validate_context(ctx);
  CHECK(val.projector_residual < 1e-12);
  CHECK(val.ok());  // degeneracy is a property, not a construction error
  Matrix gram(1, 1);
  gram(0, 0) = ctx.pair(ba[0], ba[0]);
  CHECK(gram.norm() == 0.0);  // the pairing restricted to 𝔞 vanishes
}

TEST_CASE("coordinate round trip over the stacked basis") {
  for (LieContext ctx : {LieContext::qr_iwasawa(3, AlgebraKind::Sl),
                         LieContext::lu_gauss(3, AlgebraKind::Gl)}) {
    std::mt19937_64 rng(15);
    Matrix x = random_in(rng, ctx);
    Vector c = ctx.algebra_coords(x);
    CHECK(c.size() == ctx.dim());
    CHECK((ctx.from_algebra_coords(c) - x).norm() < 1e-12);
  }
}
