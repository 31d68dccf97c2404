#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "aks/check_battery.hpp"
#include "aks/constraint_gnh.hpp"
#include "aks/reduced_dynamics.hpp"
#include "aks/serialization.hpp"

namespace {

using aks::Json;
using aks::Matrix;

int log_level() {
  const char* env = std::getenv("AKS_FLOW_LOG");
  if (!env) return 0;
  std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[aks-flow] " << msg << "\n";
}

struct Config {
  std::string preset = "toda";
  int n = 3;
  std::string mu, nu, g0, sigma0;  // JSON inline or @file
  double t_end = 1.0;
  double h = 1e-3;
  int samples = 100;
  std::uint64_t seed = 0;
  std::string out;
  bool verify_fd = false;
  bool break_sign = false;
};

Matrix parse_matrix_arg(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::runtime_error("cannot open " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return aks::matrix_from_json(Json::parse(text));
}

aks::AKSSystem build_system(const Config& cfg) {
  std::optional<aks::AKSSystem> sys;
  if (cfg.preset == "toda")
    sys.emplace(aks::toda_preset(cfg.n));
  else if (cfg.preset == "gl-lu")
    sys.emplace(aks::gl_lu_preset(cfg.n, cfg.seed));
  else
    throw std::runtime_error("unknown preset '" + cfg.preset + "'");
  if (!cfg.mu.empty() || !cfg.nu.empty()) {
    const aks::LieContext& ctx = sys->ctx();
    aks::DualVector mu = cfg.mu.empty()
                             ? sys->mu()
                             : ctx.dual(parse_matrix_arg(cfg.mu));
    aks::DualVector nu = cfg.nu.empty()
                             ? sys->nu()
                             : ctx.dual(parse_matrix_arg(cfg.nu));
    sys.emplace(ctx, std::move(mu), std::move(nu));
  }
  return std::move(*sys);
}

aks::PhasePoint seed_point(const aks::AKSSystem& sys, const Config& cfg) {
  aks::PhasePoint p = aks::canonical_seed(sys);
  if (!cfg.g0.empty()) p.g = sys.ctx().group(parse_matrix_arg(cfg.g0));
  if (!cfg.sigma0.empty())
    p.sigma = sys.ctx().dual(parse_matrix_arg(cfg.sigma0));
  return p;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

int cmd_simulate(const Config& cfg) {
  aks::AKSSystem sys = build_system(cfg);
  aks::PhasePoint p0 = seed_point(sys, cfg);
  std::vector<double> ts;
  if (cfg.t_end <= 0 || cfg.samples <= 1)
    ts.push_back(0.0);
  else
    for (int k = 0; k < cfg.samples; ++k)
      ts.push_back(cfg.t_end * k / (cfg.samples - 1));
  log_info("simulate: " + std::to_string(ts.size()) + " sample times");
  auto orbit = aks::reduced_flow_by_factorization(sys, p0, ts);
  std::vector<std::pair<double, aks::OrbitPoint>> tr;
  for (std::size_t i = 0; i < ts.size(); ++i) tr.emplace_back(ts[i], orbit[i]);

  std::ostringstream csv;
  aks::write_trajectory_csv(csv, sys, tr);

  const aks::LieContext& ctx = sys.ctx();
  auto ref = aks::spectrum(ctx.sharp(orbit[0].omega1).rep +
                           ctx.sharp(orbit[0].omega2).rep);
  const double h0 = aks::reduced_hamiltonian(ctx, orbit[0]);
  double spectral_drift = 0, h_drift = 0;
  for (const auto& o : orbit) {
    auto sp = aks::spectrum(ctx.sharp(o.omega1).rep + ctx.sharp(o.omega2).rep);
    for (std::size_t i = 0; i < sp.size(); ++i)
      spectral_drift =
          std::max(spectral_drift, std::hypot(sp[i].first - ref[i].first,
                                              sp[i].second - ref[i].second));
    h_drift = std::max(h_drift,
                       std::abs(aks::reduced_hamiltonian(ctx, o) - h0));
  }
  Json meta;
  meta["context"] = aks::context_to_json(ctx);
  meta["preset"] = cfg.preset;
  meta["rng_seed"] = cfg.seed;
  meta["seed_point"] = {{"g0", aks::matrix_to_json(p0.g.rep)},
                        {"sigma0", aks::matrix_to_json(p0.sigma.rep)}};
  meta["t_end"] = cfg.t_end;
  meta["samples"] = static_cast<int>(ts.size());
  meta["drift"] = {{"spectral", spectral_drift}, {"hamiltonian", h_drift}};

  write_output(cfg.out, csv.str());
  if (cfg.out.empty())
    std::cout << meta.dump(2) << "\n";
  else
    write_output(cfg.out + ".meta.json", meta.dump(2) + "\n");
  return 0;
}

int cmd_compare(const Config& cfg) {
  aks::AKSSystem sys = build_system(cfg);
  aks::PhasePoint p0 = seed_point(sys, cfg);
  log_info("compare: t_end=" + std::to_string(cfg.t_end) +
           " h=" + std::to_string(cfg.h));
  aks::TrajectoryComparison cmp =
      aks::compare_trajectories(sys, p0, cfg.t_end, cfg.h);
  Json j = aks::comparison_to_json(cmp);
  j["rng_seed"] = cfg.seed;
  std::cout << j.dump(2) << "\n";
  if (!cfg.out.empty()) write_output(cfg.out, j.dump(2) + "\n");
  return 0;
}

int cmd_check(const Config& cfg, bool list_only) {
  if (list_only) {
    for (const auto& name : aks::check_names()) std::cout << name << "\n";
    return 0;
  }
  aks::AKSSystem sys = build_system(cfg);
  aks::CheckOptions opts;
  opts.seed = cfg.seed;
  opts.verify_fd = cfg.verify_fd;
  opts.break_sign = cfg.break_sign;
  opts.t_end = cfg.t_end;
  opts.h = cfg.h;
  log_info("check: running the battery");
  auto results = aks::run_checks(sys, opts);
  bool all_pass = true;
  Json checks = Json::array();
  for (const auto& r : results) {
    Json c;
    c["name"] = r.name;
    c["samples"] = r.samples;
    c["max_residual"] = r.max_residual;
    c["pass"] = r.pass;
    if (!r.skipped.empty()) c["skipped"] = r.skipped;
    checks.push_back(std::move(c));
    if (r.skipped.empty() && !r.pass) all_pass = false;
  }
  Json report;
  report["preset"] = cfg.preset;
  report["n"] = cfg.n;
  report["rng_seed"] = cfg.seed;
  report["checks"] = std::move(checks);
  report["all_pass"] = all_pass;
  std::cout << report.dump(2) << "\n";
  if (!cfg.out.empty()) write_output(cfg.out, report.dump(2) + "\n");
  if (!all_pass) {
    for (const auto& r : results)
      if (r.skipped.empty() && !r.pass)
        std::cerr << "FAILED: " << r.name << " (max residual "
                  << r.max_residual << ")\n";
    return 1;
  }
  return 0;
}

void add_common_flags(CLI::App* cmd, Config& cfg) {
  // --h (step size) would collide with the default -h help short flag
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--config", "JSON config file (flags override it)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--preset", cfg.preset, "System preset: toda or gl-lu");
  cmd->add_option("--n", cfg.n, "Matrix size")->check(CLI::PositiveNumber);
  cmd->add_option("--mu", cfg.mu, "Momentum value mu (JSON matrix or @file)");
  cmd->add_option("--nu", cfg.nu, "Momentum value nu (JSON matrix or @file)");
  cmd->add_option("--g0", cfg.g0, "Initial group element (JSON or @file)");
  cmd->add_option("--sigma0", cfg.sigma0, "Initial sigma (JSON or @file)");
  cmd->add_option("--t-end", cfg.t_end, "End time");
  cmd->add_option("--h", cfg.h, "Integrator step size");
  cmd->add_option("--samples", cfg.samples, "Number of output samples");
  cmd->add_option("--rng-seed", cfg.seed, "RNG seed (recorded in outputs)");
  cmd->add_option("--out", cfg.out, "Output file (stdout when omitted)");
  cmd->add_flag("--verify-fd", cfg.verify_fd,
                "Enable finite-difference cross-checks");
}

// Config file values fill every flag the command line left untouched.
void apply_config_file(CLI::App* cmd, Config& cfg) {
  if (!cmd->count("--config")) return;
  const std::string path = cmd->get_option("--config")->as<std::string>();
  std::ifstream in(path);
  Json j = Json::parse(in);
  const auto set_if_absent = [&](const char* flag, const char* key,
                                 auto& target) {
    if (!cmd->count(flag) && j.contains(key))
      target = j[key].get<std::decay_t<decltype(target)>>();
  };
  set_if_absent("--preset", "preset", cfg.preset);
  set_if_absent("--n", "n", cfg.n);
  set_if_absent("--mu", "mu", cfg.mu);
  set_if_absent("--nu", "nu", cfg.nu);
  set_if_absent("--g0", "g0", cfg.g0);
  set_if_absent("--sigma0", "sigma0", cfg.sigma0);
  set_if_absent("--t-end", "t_end", cfg.t_end);
  set_if_absent("--h", "h", cfg.h);
  set_if_absent("--samples", "samples", cfg.samples);
  set_if_absent("--rng-seed", "rng_seed", cfg.seed);
  set_if_absent("--out", "out", cfg.out);
  set_if_absent("--verify-fd", "verify_fd", cfg.verify_fd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AKS flows on factorizable matrix Lie groups"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Config sim_cfg, cmp_cfg, chk_cfg;
  bool list_only = false;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Integrate the reduced flow and emit a CSV trajectory");
  add_common_flags(sim, sim_cfg);

  CLI::App* cmp = app.add_subcommand(
      "compare", "Compare the factorization route against RK4");
  add_common_flags(cmp, cmp_cfg);

  CLI::App* chk = app.add_subcommand(
      "check", "Run the verification battery");
  add_common_flags(chk, chk_cfg);
  chk->add_flag("--break-sign", chk_cfg.break_sign,
                "Negative control: flip the sign in the pullback identity");
  chk->add_flag("--list", list_only, "List check names without running");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      apply_config_file(sim, sim_cfg);
      return cmd_simulate(sim_cfg);
    }
    if (cmp->parsed()) {
      apply_config_file(cmp, cmp_cfg);
      return cmd_compare(cmp_cfg);
    }
    apply_config_file(chk, chk_cfg);
    return cmd_check(chk_cfg, list_only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
