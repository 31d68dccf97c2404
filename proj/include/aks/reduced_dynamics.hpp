#ifndef AKS_REDUCED_DYNAMICS_HPP
#define AKS_REDUCED_DYNAMICS_HPP

#include "aks/aks_system.hpp"

namespace aks {

class StepRejected : public std::runtime_error {
 public:
  explicit StepRejected(double t)
      : std::runtime_error("reduced integration blew up at t=" +
                           std::to_string(t)),
        t(t) {}
  double t;
};

/// The reduced Hamiltonian vector field on 𝔟⁰ × 𝔞⁰ with ζ = ω₁♯ + ω₂♯:
///   (−π_{𝔟⁰}(ad♯_{π_𝔞 ζ} ω₁), π_{𝔞⁰}(ad♯_{π_𝔟 ζ} ω₂)).
/// The first-slot sign follows from differentiating the factorization
/// solution; it annihilates dH_{μν} and reproduces M_derivative of the
/// unreduced velocity.
std::pair<DualVector, DualVector> reduced_vector_field(const LieContext& ctx,
                                                       const OrbitPoint& o);

/// Fixed-step RK4 in the flat ambient space 𝔟⁰ × 𝔞⁰ (an invariant set of the
/// projected field). Orbit drift is measured elsewhere, never corrected.
std::vector<std::pair<double, OrbitPoint>> integrate_reduced(
    const LieContext& ctx, const OrbitPoint& o0, double t_end, double h);

struct TrajectoryComparison {
  double sup_deviation = 0;
  std::vector<std::pair<double, double>> per_time;  // (t, deviation)
  double order_estimate = 0;
  double wall_clock_factorization = 0;  // seconds
  double wall_clock_rk4 = 0;
};

/// Sup-norm deviation over matched times between RK4 (seeded at L_map(p0))
/// and the exact factorization route, with wall clock for each.
TrajectoryComparison compare_trajectories(const AKSSystem& sys,
                                          const PhasePoint& p0, double t_end,
                                          double h);

}  // namespace aks

#endif
