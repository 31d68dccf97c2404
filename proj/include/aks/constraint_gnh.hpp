#ifndef AKS_CONSTRAINT_GNH_HPP
#define AKS_CONSTRAINT_GNH_HPP

#include <array>
#include <cstdint>

#include "aks/aks_system.hpp"

namespace aks {

/// A point (g, J; α, β; σ) of the Lepage-equivalent phase space.
struct ExtendedPoint {
  GroupElement g;
  AlgebraVector J;
  AlgebraVector alpha;  // in 𝔞
  AlgebraVector beta;   // in 𝔟
  DualVector sigma;
};

/// A tangent (ξ, δJ, δα, δβ; δσ), group slot left-trivialized.
struct ExtendedTangent {
  AlgebraVector xi;
  AlgebraVector dJ;
  AlgebraVector dalpha;
  AlgebraVector dbeta;
  DualVector dsigma;
};

class OffPrimarySurface : public std::runtime_error {
 public:
  explicit OffPrimarySurface(double residual)
      : std::runtime_error("extended point is off the primary constraint "
                           "surface, residual " + std::to_string(residual)),
        residual(residual) {}
  double residual;
};

ExtendedPoint make_extended_point(const LieContext& ctx, GroupElement g,
                                  AlgebraVector J, AlgebraVector alpha,
                                  AlgebraVector beta, DualVector sigma);

ExtendedPoint step_extended(const LieContext& ctx, const ExtendedPoint& l,
                            const ExtendedTangent& X, double t);

// Presymplectic form: ω₀(X,Y) = δσ_X(ξ_Y) − δσ_Y(ξ_X) − σ([ξ_X, ξ_Y]).
double omega0(const LieContext& ctx, const ExtendedPoint& l,
              const ExtendedTangent& X, const ExtendedTangent& Y);

// H = σ(Ad_{g⁻¹}α + β − J) + ½B(J,J) − μ(α) − ν(β); the expanded form
// −½σ(J) + ½(J♭−σ)(J) + (Ad♯_gσ−μ)(α) + (σ−ν)(β) is asserted to agree.
double extended_hamiltonian(const AKSSystem& sys, const ExtendedPoint& l);

// The three primary-constraint residual functionals, in order:
// J♭ − σ, π_{𝔟⁰}(Ad♯_g σ) − μ, π_{𝔞⁰}(σ) − ν.
std::array<DualVector, 3> primary_constraints(const AKSSystem& sys,
                                              const ExtendedPoint& l);

double primary_residual(const AKSSystem& sys, const ExtendedPoint& l);

struct StabilityFdCheck {
  double fd2 = 0, fd3 = 0;          // central differences of H
  double residual2 = 0, residual3 = 0;
};

// Closed-form stability derivatives along the perp-space generators:
//   X_{f₂^κ}·H = (ad♯_α μ)(π_𝔞 κ),  X_{f₃^ω}·H = (π_{𝔞⁰}(ad♯_β ν))(π_𝔟 ω).
// Requires l ∈ Λ̃^(1). When fd is non-null the derivatives are re-measured
// by central differences of extended_hamiltonian along the generators.
std::pair<double, double> stability_derivatives(const AKSSystem& sys,
                                                const ExtendedPoint& l,
                                                const AlgebraVector& kappa,
                                                const AlgebraVector& omega,
                                                StabilityFdCheck* fd = nullptr);

// The perp-space generators of the constraint functions f₂^κ, f₃^ω
// (arbitrary slots fixed to zero).
ExtendedTangent f2_generator(const LieContext& ctx, const ExtendedPoint& l,
                             const AlgebraVector& kappa);
ExtendedTangent f3_generator(const LieContext& ctx, const ExtendedPoint& l,
                             const AlgebraVector& omega);

// SVD nullspace of ω₀ assembled over a tangent basis; the kernel is
// {X : ξ = 0, δσ = 0} of dimension 2·dim 𝔤.
std::vector<ExtendedTangent> kernel_omega0(const LieContext& ctx,
                                           const ExtendedPoint& l);

struct GnhSampleDiagnostics {
  std::array<double, 3> primary_residuals{};
  double stability_max = 0;        // over a basis of κ ∈ 𝔞, ω ∈ 𝔟
  double stability_fd_residual = 0;  // only with verify_fd
  double secondary_alpha_dist = 0;   // distance of α to 𝔞_μ
  double secondary_beta_dist = 0;    // distance of β to 𝔟_ν
  int kernel_dim = 0;
  double kernel_char_residual = 0;   // ‖ξ‖+‖δσ‖ over the kernel basis
  int perp1_dim = 0;                 // dim (T Λ̃^(1))^⊥
  int perp2_dim = 0;                 // dim (T Λ̃^(2))^⊥
  bool perp_spaces_equal = false;
  int dim_audit_lhs = 0;   // dim(TN)^⊥ by rank
  int dim_audit_rhs = 0;   // dim P − dim N + dim(Ker ω₀ ∩ TN)
  bool on_primary = false;
  bool on_secondary = false;
};

struct GnhReport {
  std::vector<GnhSampleDiagnostics> samples;
  bool terminated = false;  // no tertiary constraints on Λ̃^(2) samples
};

GnhReport run_gnh(const AKSSystem& sys,
                  const std::vector<ExtendedPoint>& samples,
                  bool verify_fd = false);

// Sampling helpers: back-solve σ from the momentum constraints at a given g,
// set J = σ♯; α, β random in 𝔞/𝔟 (primary surface) or in the isotropy
// subalgebras (secondary surface).
ExtendedPoint sample_primary(const AKSSystem& sys, std::uint64_t seed,
                             bool on_secondary);

// Solve the (linear in σ) level-set conditions at g; throws if g violates
// the nondegeneracy hypothesis.
DualVector solve_sigma(const AKSSystem& sys, const GroupElement& g);

}  // namespace aks

#endif
