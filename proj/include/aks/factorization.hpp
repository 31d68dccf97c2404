#ifndef AKS_FACTORIZATION_HPP
#define AKS_FACTORIZATION_HPP

#include <optional>

#include "aks/lie_context.hpp"

namespace aks {

struct Factors {
  GroupElement a;  // in the subgroup integrating 𝔞 (g_+ / g_A)
  GroupElement b;  // in the subgroup integrating 𝔟 (g_− / g_B)
  int iterations = 0;
};

class NotFactorizable : public std::runtime_error {
 public:
  NotFactorizable(int minor_index, double time_stamp = 0.0)
      : std::runtime_error("factorization does not exist: leading minor " +
                           std::to_string(minor_index) + " vanishes" +
                           (time_stamp != 0.0
                                ? " at t=" + std::to_string(time_stamp)
                                : "")),
        minor_index(minor_index),
        time_stamp(time_stamp) {}
  int minor_index;
  double time_stamp;
};

class NoConvergence : public std::runtime_error {
 public:
  explicit NoConvergence(double residual)
      : std::runtime_error("Newton factorization did not converge, residual " +
                           std::to_string(residual)),
        residual(residual) {}
  double residual;
};

/// Solve g = g_A·g_B for the configured splitting. QR (Householder,
/// re-signed for a positive-diagonal triangular factor) for qr_iwasawa,
/// unpivoted Gaussian elimination for lu_gauss, Newton for custom.
Factors factorize(const LieContext& ctx, const GroupElement& g);

/// Generic factorization by iterating on the defect
/// d = log(g_A⁻¹·g·g_B⁻¹), updating g_A ← g_A·exp(π_𝔞 d), g_B ← exp(π_𝔟 d)·g_B.
/// Factors stay in their subgroups by construction. Default guess (e, e).
Factors factorize_newton(const LieContext& ctx, const GroupElement& g,
                         std::optional<Factors> guess = std::nullopt,
                         int max_iter = 100, double tol = 1e-12);

Matrix matrix_exp(const Matrix& x);
Matrix matrix_log(const Matrix& x);

}  // namespace aks

#endif
