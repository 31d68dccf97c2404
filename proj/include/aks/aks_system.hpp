#ifndef AKS_AKS_SYSTEM_HPP
#define AKS_AKS_SYSTEM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "aks/factorization.hpp"
#include "aks/lie_context.hpp"

namespace aks {

/// A point (g, σ) of G × 𝔤* (left-trivialized cotangent bundle).
struct PhasePoint {
  GroupElement g;
  DualVector sigma;
};

/// A point (ω₁, ω₂) of 𝔟⁰ × 𝔞⁰ on the orbit product 𝒪^A_μ × 𝒪^B_ν.
struct OrbitPoint {
  DualVector omega1;  // in 𝔟⁰
  DualVector omega2;  // in 𝔞⁰
};

class OffLevelSet : public std::runtime_error {
 public:
  explicit OffLevelSet(double residual)
      : std::runtime_error("phase point is off the momentum level set, "
                           "residual " +
                           std::to_string(residual)),
        residual(residual) {}
  double residual;
};

/// An AKS system: context plus the momentum values μ ∈ 𝔟⁰, ν ∈ 𝔞⁰.
class AKSSystem {
 public:
  AKSSystem(LieContext ctx, DualVector mu, DualVector nu);

  const LieContext& ctx() const { return ctx_; }
  const DualVector& mu() const { return mu_; }
  const DualVector& nu() const { return nu_; }

 private:
  LieContext ctx_;
  DualVector mu_;
  DualVector nu_;
};

// J(g,σ) = (π_{𝔟⁰}(Ad♯_g σ), π_{𝔞⁰}(σ)).
std::pair<DualVector, DualVector> momentum_map(const LieContext& ctx,
                                               const PhasePoint& p);

// ‖π_{𝔟⁰}(Ad♯_g σ) − μ‖_F + ‖π_{𝔞⁰}(σ) − ν‖_F.
double constraint_residual(const AKSSystem& sys, const PhasePoint& p);

// H(g,σ) = ½·σ(σ♯) = ½·tr(F²).
double hamiltonian(const LieContext& ctx, const PhasePoint& p);

// Exact unreduced solution t ↦ (g·exp(t·σ♯), σ).
PhasePoint unreduced_flow(const LieContext& ctx, const PhasePoint& p0,
                          double t);

// Factorize g = g_A·g_B and map to the orbit product:
//   (π_{𝔟⁰}(Ad♯_{g_A⁻¹} μ), π_{𝔞⁰}(Ad♯_{g_B} ν)).
// The alternate formula (π_{𝔟⁰}(Ad♯_{g_B} σ), π_{𝔞⁰}(Ad♯_{g_B} σ)) is
// asserted to agree to 1e-9 on every call.
OrbitPoint L_map(const AKSSystem& sys, const PhasePoint& p, double tol = 1e-8);

// H_{μν}(ω₁,ω₂) = ½ω₁(ω₁♯) + ½ω₂(ω₂♯) + ω₁(ω₂♯).
double reduced_hamiltonian(const LieContext& ctx, const OrbitPoint& o);

// Exact reduced flow: factorize g·exp(t·σ♯) at each t and emit orbit points.
std::vector<OrbitPoint> reduced_flow_by_factorization(
    const AKSSystem& sys, const PhasePoint& p0, const std::vector<double>& ts);

enum class IsotropySide { AMu, BNu };

// Basis of 𝔞_μ = {κ ∈ 𝔞 : π_{𝔟⁰}(ad♯_κ μ) = 0} (or 𝔟_ν, symmetrically).
std::vector<AlgebraVector> isotropy_subalgebra(const AKSSystem& sys,
                                               IsotropySide side);

// Eigenvalues of a representative, sorted by (real, imag); the spectral
// invariants of the Lax matrix sharp(ω₁+ω₂).
std::vector<std::pair<double, double>> spectrum(const Matrix& m);

// Canonical seed point (e, μ+ν); it sits on the level set identically.
PhasePoint canonical_seed(const AKSSystem& sys);

// Preset catalog.
// "toda": sl(n), qr_iwasawa, μ = 0, ν = flat of the Jacobi matrix with zero
// diagonal and unit off-diagonal.
AKSSystem toda_preset(int n);
// "gl-lu": gl(n), lu_gauss, small random μ ∈ 𝔟⁰, ν ∈ 𝔞⁰.
AKSSystem gl_lu_preset(int n, std::uint64_t seed);

}  // namespace aks

#endif
