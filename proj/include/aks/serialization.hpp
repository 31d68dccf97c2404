#ifndef AKS_SERIALIZATION_HPP
#define AKS_SERIALIZATION_HPP

#include <iosfwd>
#include "json.hpp"

#include "aks/aks_system.hpp"
#include "aks/constraint_gnh.hpp"
#include "aks/reduced_dynamics.hpp"

namespace aks {

using Json = nlohmann::json;

// Matrices travel as row-major nested arrays.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json context_to_json(const LieContext& ctx);

// CSV schema "# aks-flow csv v1": t, row-major sharp(ω₁), sharp(ω₂),
// H_{μν}, constraint residual against the exact flow seed, then the sorted
// spectral invariants of the Lax matrix sharp(ω₁+ω₂).
void write_trajectory_csv(std::ostream& os, const AKSSystem& sys,
                          const std::vector<std::pair<double, OrbitPoint>>& tr);

Json comparison_to_json(const TrajectoryComparison& cmp);

Json gnh_report_to_json(const GnhReport& report);

}  // namespace aks

#endif
