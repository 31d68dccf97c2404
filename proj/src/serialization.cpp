#include "aks/serialization.hpp"

#include <iomanip>
#include <ostream>

namespace aks {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument("matrix: expected a nested array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (int k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Json context_to_json(const LieContext& ctx) {
  Json j;
  j["n"] = ctx.n();
  j["algebra"] = ctx.algebra_kind() == AlgebraKind::Gl ? "gl" : "sl";
  switch (ctx.splitting_kind()) {
    case SplittingKind::QrIwasawa: j["splitting"] = "qr_iwasawa"; break;
    case SplittingKind::LuGauss: j["splitting"] = "lu_gauss"; break;
    case SplittingKind::Custom: j["splitting"] = "custom"; break;
  }
  Json ba = Json::array(), bb = Json::array();
  for (const Matrix& m : ctx.basis_a()) ba.push_back(matrix_to_json(m));
  for (const Matrix& m : ctx.basis_b()) bb.push_back(matrix_to_json(m));
  j["basis_a"] = std::move(ba);
  j["basis_b"] = std::move(bb);
  return j;
}

void write_trajectory_csv(
    std::ostream& os, const AKSSystem& sys,
    const std::vector<std::pair<double, OrbitPoint>>& tr) {
  const LieContext& ctx = sys.ctx();
  const int n = ctx.n();
  os << "# aks-flow csv v1\n";
  os << "t";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) os << ",w1_" << i << j;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) os << ",w2_" << i << j;
  os << ",H,constraint_residual";
  for (int i = 0; i < n; ++i) os << ",lambda" << i << "_re,lambda" << i << "_im";
  os << "\n";
  os << std::setprecision(17);
  for (const auto& [t, o] : tr) {
    os << t;
    Matrix s1 = ctx.sharp(o.omega1).rep;
    Matrix s2 = ctx.sharp(o.omega2).rep;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) os << "," << s1(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) os << "," << s2(i, j);
    os << "," << reduced_hamiltonian(ctx, o);
    const double drift =
        (o.omega1.rep - ctx.project_b0(o.omega1).rep).norm() +
        (o.omega2.rep - ctx.project_a0(o.omega2).rep).norm();
    os << "," << drift;
    for (const auto& [re, im] : spectrum(s1 + s2))
      os << "," << re << "," << im;
    os << "\n";
  }
}

Json comparison_to_json(const TrajectoryComparison& cmp) {
  Json j;
  j["sup_deviation"] = cmp.sup_deviation;
  Json per = Json::array();
  for (const auto& [t, d] : cmp.per_time) per.push_back({t, d});
  j["per_time"] = std::move(per);
  j["order_estimate"] = cmp.order_estimate;
  j["wall_clock"] = {{"factorization", cmp.wall_clock_factorization},
                     {"rk4", cmp.wall_clock_rk4}};
  return j;
}

Json gnh_report_to_json(const GnhReport& report) {
  Json samples = Json::array();
  for (const auto& d : report.samples) {
    Json s;
    s["primary_residuals"] = {d.primary_residuals[0], d.primary_residuals[1],
                              d.primary_residuals[2]};
    s["stability_max"] = d.stability_max;
    s["stability_fd_residual"] = d.stability_fd_residual;
    s["secondary_alpha_dist"] = d.secondary_alpha_dist;
    s["secondary_beta_dist"] = d.secondary_beta_dist;
    s["kernel_dim"] = d.kernel_dim;
    s["kernel_char_residual"] = d.kernel_char_residual;
    s["perp1_dim"] = d.perp1_dim;
    s["perp2_dim"] = d.perp2_dim;
    s["perp_spaces_equal"] = d.perp_spaces_equal;
    s["dim_audit"] = {{"lhs", d.dim_audit_lhs}, {"rhs", d.dim_audit_rhs}};
    s["on_primary"] = d.on_primary;
    s["on_secondary"] = d.on_secondary;
    samples.push_back(std::move(s));
  }
  return Json{{"samples", std::move(samples)},
              {"terminated", report.terminated}};
}

}  // namespace aks
