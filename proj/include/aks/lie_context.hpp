#ifndef AKS_LIE_CONTEXT_HPP
#define AKS_LIE_CONTEXT_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace aks {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class AlgebraKind { Gl, Sl };
enum class SplittingKind { QrIwasawa, LuGauss, Custom };

/// Element of the matrix Lie algebra 𝔤 (traceless in sl mode).
struct AlgebraVector {
  Matrix rep;
};

/// Element of 𝔤*, stored as the matrix representative F of the functional
/// X ↦ tr(F·X) under the trace pairing.
struct DualVector {
  Matrix rep;
};

/// Invertible group element (determinant 1 in sl mode).
struct GroupElement {
  Matrix rep;
};

struct NondegeneracyResult {
  bool ok = false;
  AlgebraVector witness;  // nonzero element of 𝔟 ∩ Ad_g(𝔞) when !ok
};

/// A matrix Lie algebra 𝔤 of n×n real matrices with a splitting 𝔤 = 𝔞 ⊕ 𝔟
/// and the trace pairing B(X,Y) = tr(XY). The dual splitting 𝔤* = 𝔞⁰ ⊕ 𝔟⁰
/// is derived from the primal one: π_{𝔞⁰}φ = φ∘π_𝔟, π_{𝔟⁰}φ = φ∘π_𝔞.
///
/// All values are immutable after construction; every operation is a pure
/// function of its inputs.
class LieContext {
 public:
  static LieContext qr_iwasawa(int n, AlgebraKind kind);  // 𝔞 skew, 𝔟 upper
  static LieContext lu_gauss(int n, AlgebraKind kind);    // 𝔞 strict lower, 𝔟 upper
  static LieContext custom(int n, AlgebraKind kind, std::vector<Matrix> basis_a,
                           std::vector<Matrix> basis_b);

  int n() const { return n_; }
  int dim() const { return dim_; }          // dim 𝔤
  int dim_a() const { return static_cast<int>(basis_a_.size()); }
  int dim_b() const { return static_cast<int>(basis_b_.size()); }
  AlgebraKind algebra_kind() const { return kind_; }
  SplittingKind splitting_kind() const { return splitting_; }

  const std::vector<Matrix>& basis_a() const { return basis_a_; }
  const std::vector<Matrix>& basis_b() const { return basis_b_; }
  std::vector<Matrix> basis_g() const;  // basis_a ++ basis_b

  // Primal projections 𝔤 → 𝔞, 𝔟.
  Matrix proj_a(const Matrix& x) const;
  Matrix proj_b(const Matrix& x) const;

  // Validated constructors for the domain types.
  AlgebraVector algebra(Matrix rep) const;
  DualVector dual(Matrix rep) const;      // sl mode: trace part removed
  GroupElement group(Matrix rep) const;   // throws on singular rep
  GroupElement identity() const;

  double pair(const Matrix& x, const Matrix& y) const { return (x * y).trace(); }
  double eval(const DualVector& phi, const AlgebraVector& x) const {
    return (phi.rep * x.rep).trace();
  }

  DualVector flat(const AlgebraVector& x) const;
  AlgebraVector sharp(const DualVector& phi) const;

  DualVector project_a0(const DualVector& phi) const;  // annihilates 𝔞
  DualVector project_b0(const DualVector& phi) const;  // annihilates 𝔟

  AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) const;

  // (ad♯_ξ φ)(η) = φ([η, ξ]); representative [ξ, F].
  DualVector coad_ad(const AlgebraVector& xi, const DualVector& phi) const;
  // (Ad♯_g φ)(ξ) = φ(Ad_{g⁻¹} ξ); representative g·F·g⁻¹.
  DualVector coad_Ad(const GroupElement& g, const DualVector& phi) const;

  // true iff 𝔟 ∩ Ad_g(𝔞) = {0}; a nonzero witness is returned on failure.
  NondegeneracyResult check_nondegeneracy(const GroupElement& g) const;

  Matrix remove_trace(const Matrix& m) const;  // identity in gl mode

  // Coordinates of an algebra element over basis_g and back.
  Vector algebra_coords(const Matrix& x) const;
  Matrix from_algebra_coords(const Vector& c) const;

 private:
  LieContext(int n, AlgebraKind kind, SplittingKind splitting,
             std::vector<Matrix> basis_a, std::vector<Matrix> basis_b);

  int n_;
  int dim_;
  AlgebraKind kind_;
  SplittingKind splitting_;
  std::vector<Matrix> basis_a_;
  std::vector<Matrix> basis_b_;
  Matrix pa_;        // n²×n² matrix of π_𝔞 on vec(X)
  Matrix pb_;
  Matrix coords_;    // pseudoinverse mapping vec(X) to basis coordinates
};

/// Residuals of the structural invariants (subalgebra closure, direct sum,
/// projector algebra, ad-invariance of the pairing). All should sit at
/// rounding level for a well-formed context.
struct ContextValidation {
  double closure_a = 0, closure_b = 0;
  double direct_sum_defect = 0;   // dim 𝔤 − rank of stacked bases
  double projector_residual = 0;  // id − (π_𝔞+π_𝔟), idempotency, π_𝔞π_𝔟
  double pairing_gram_min_sv = 0;
  double ad_invariance = 0;
  bool ok(double tol = 1e-12) const;
};

ContextValidation validate_context(const LieContext& ctx);

}  // namespace aks

#endif
