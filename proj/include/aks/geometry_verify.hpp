#ifndef AKS_GEOMETRY_VERIFY_HPP
#define AKS_GEOMETRY_VERIFY_HPP

#include <cstdint>

#include "aks/aks_system.hpp"

namespace aks {

/// Left-trivialized tangent (ξ, η) to G × 𝔤* at a phase point.
struct PhaseTangent {
  AlgebraVector xi;
  DualVector eta;
};

/// Tangent to the orbit product presented by its generators ξ ∈ 𝔞, ζ ∈ 𝔟;
/// the tangent itself is (π_{𝔟⁰}(ad♯_ξ ω₁), π_{𝔞⁰}(ad♯_ζ ω₂)).
struct OrbitTangentGens {
  AlgebraVector xi;    // in 𝔞
  AlgebraVector zeta;  // in 𝔟
};

// Canonical form on G × 𝔤*: η_X(ξ_Y) − η_Y(ξ_X) − σ([ξ_X, ξ_Y]).
double canonical_form(const LieContext& ctx, const PhasePoint& p,
                      const PhaseTangent& X, const PhaseTangent& Y);

// Residual of the level-set tangency conditions at p:
// ‖π_{𝔟⁰}(Ad♯_g(ad♯_ξ σ + η))‖ + ‖π_{𝔞⁰}(η)‖.
double lambda_tangency_residual(const AKSSystem& sys, const PhasePoint& p,
                                const PhaseTangent& X);

// Numeric nullspace of the tangency conditions; dimension dim 𝔤 at regular
// points. Every basis vector is re-checked against the conjugated form of
// the condition (through the factorization of g) to 1e-9.
std::vector<PhaseTangent> lambda_tangent_basis(const AKSSystem& sys,
                                               const PhasePoint& p);

// Differential of L_map at p applied to a level-set tangent v. With
// g = g_A·g_B, ξ_A = π_𝔞(Ad_{g_B}ξ), ξ_B = π_𝔟(Ad_{g_B}ξ):
//   (−π_{𝔟⁰}(ad♯_{ξ_A} Ad♯_{g_A⁻¹}μ), π_{𝔞⁰}(ad♯_{ξ_B} Ad♯_{g_B}ν)).
// The equivalent σ-based expression is asserted to agree to 1e-9.
std::pair<DualVector, DualVector> M_derivative(const AKSSystem& sys,
                                               const PhasePoint& p,
                                               const PhaseTangent& v);

// Generator presentation of the image tangent M_derivative(v): (−ξ_A, ξ_B).
OrbitTangentGens image_tangent_gens(const AKSSystem& sys, const PhasePoint& p,
                                    const PhaseTangent& v);

// Product KKS form ω_μ − ω_ν on generators: ω₁([ξ₁, ξ₂]) − ω₂([ζ₁, ζ₂]).
// Well-definedness under isotropy shifts of the generators is asserted
// to 1e-9 on every call.
double kks_form(const LieContext& ctx, const OrbitPoint& o,
                const OrbitTangentGens& U, const OrbitTangentGens& V);

// Max over `trials` random tangent pairs of
// |canonical_form(p, u, v) − kks_form(L_map(p), gens(u), gens(v))|.
// flip_sign evaluates ω_μ + ω_ν instead (negative control; residual O(1)).
double pullback_check(const AKSSystem& sys, const PhasePoint& p, int trials,
                      std::uint64_t seed, bool flip_sign = false);

// Singular directions X(κ,ω) = (Ad_{g⁻¹}κ − ω, ad♯_ω σ) over bases of the
// isotropy subalgebras 𝔞_μ, 𝔟_ν.
std::vector<PhaseTangent> kernel_directions(const AKSSystem& sys,
                                            const PhasePoint& p);

// Central-difference generator of the lifted action
// (a,b)·(g,σ) = (a g b⁻¹, Ad♯_b σ) along (exp(tκ), exp(tω)) at t = 0.
PhaseTangent lifted_action_generator(const AKSSystem& sys, const PhasePoint& p,
                                     const AlgebraVector& kappa,
                                     const AlgebraVector& omega,
                                     double h = 1e-5);

// Nullity of the canonical form restricted to lambda_tangent_basis;
// equals dim 𝔞_μ + dim 𝔟_ν at regular points.
int restricted_form_kernel_dim(const AKSSystem& sys, const PhasePoint& p);

}  // namespace aks

#endif
