#ifndef AKS_CHECK_BATTERY_HPP
#define AKS_CHECK_BATTERY_HPP

#include <cstdint>
#include <string>

#include "aks/aks_system.hpp"

namespace aks {

struct CheckResult {
  std::string name;
  int samples = 0;
  double max_residual = 0;
  bool pass = false;
  std::string skipped;  // non-empty reason iff the check did not run
};

struct CheckOptions {
  std::uint64_t seed = 0;
  int trials = 50;        // per-check sample budget (scaled per check)
  bool verify_fd = false; // run the finite-difference stability cross-checks
  bool break_sign = false;  // negative control: flips the KKS-form sign
  double t_end = 1.0;
  double h = 1e-3;
};

/// Registered check names, in battery order.
std::vector<std::string> check_names();

/// Run the full battery on one system. Every registered check appears in the
/// result exactly once, as pass, fail, or skipped(reason).
std::vector<CheckResult> run_checks(const AKSSystem& sys,
                                    const CheckOptions& opts);

/// Random point of the momentum level set: g = exp of a small random algebra
/// element, σ back-solved from the two level conditions.
PhasePoint random_level_set_point(const AKSSystem& sys, std::uint64_t seed);

}  // namespace aks

#endif
