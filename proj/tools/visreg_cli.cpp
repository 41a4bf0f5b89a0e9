#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "visreg/visreg.hpp"

namespace {

enum Exit { kPass = 0, kCertificateFail = 1, kConfigError = 2, kRuntimeError = 3 };

void print_certificates(const std::vector<visreg::Certificate>& certs) {
  for (const auto& c : certs)
    std::printf("%-24s %s worst=%.6g tol=%.6g at %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.worst, c.tol,
                c.where().c_str());
}

int cmd_run(const std::string& path) {
  const auto cfg = visreg::load_config(path);
  const auto r = visreg::run_scenario(cfg);
  std::printf("scenario %s: %ld steps, %zu snapshots in %s\n", cfg.name.c_str(), r.steps, r.snapshots.size(),
              r.output_dir.string().c_str());
  print_certificates(r.certificates);
  return r.exit_status == 0 ? kPass : kCertificateFail;
}

int cmd_refine(const std::string& path, int levels) {
  const auto cfg = visreg::load_config(path);
  const auto rows = visreg::refinement_study(cfg, levels);
  const auto dir = visreg::output_directory(cfg);
  std::filesystem::create_directories(dir);
  visreg::write_refinement_table(dir / "refinement.csv", rows);
  std::printf("%5s %7s %12s %12s %14s %8s\n", "level", "n", "h", "dt_max", cfg.metric.c_str(), "order");
  for (const auto& r : rows)
    std::printf("%5d %7d %12.5e %12.5e %14.6e %8.3f\n", r.level, r.n, r.h, r.dt_max, r.metric, r.order);
  return kPass;
}

int cmd_check_eos(double gamma, double rho, double e) {
  const auto eos = visreg::EosModel::ideal_gas(gamma);
  const auto rep = visreg::check_admissibility(rho, e, eos);
  std::printf("convex=%d positive_temperature=%d hyperbolic=%d\n", rep.convex, rep.positive_temperature,
              rep.hyperbolic);
  const auto t = visreg::thermo_eval(rho, e, eos);
  std::printf("s=%.17g p=%.17g T=%.17g c2=%.17g cp=%.17g\n", t.sd.s, t.p, t.T, t.c2, t.cp);
  std::printf("p_rho=%.17g p_e=%.17g T_rho=%.17g T_e=%.17g cp*T_e=%.17g\n", t.p_rho, t.p_e, t.T_rho, t.T_e,
              t.cp * t.T_e);
  std::printf("det_sigma=%.17g det_sigma_via_T=%.17g det_h2=%.17g\n", t.det_sigma, t.det_sigma_via_T, t.h2.det());
  return kPass;
}

int cmd_range(double gamma, double alpha, double rho, double e) {
  const auto eos = visreg::EosModel::ideal_gas(gamma);
  const auto b = visreg::admissible_range(rho, e, alpha, eos);
  std::printf("Gamma=%.17g Delta=%.17g\n", b.gamma_coef, b.delta);
  std::printf("bounds: [%.17g, %.17g]\n", b.lo, b.hi);
  std::printf("x = 1 - a/d admissible for x in (%.17g, %.17g)\n", b.ratio_lo(), b.ratio_hi());
  return kPass;
}

int cmd_counterexample(double gamma, double a, double d, double rho, double e) {
  const auto eos = visreg::EosModel::ideal_gas(gamma);
  const auto r = visreg::a_neq_d_counterexample(rho, e, a, d, eos);
  std::printf("x=%.17g lambda_pos=%.17g\n", r.x, r.lambda_pos);
  std::printf("X=%.17g Y=%.17g epsilon=%.17g (bound %.17g) q=%.17g\n", r.X, r.Y, r.epsilon, r.epsilon_bound, r.q);
  std::printf("pointwise violation=%.17g oracle=%.17g\n", r.pointwise_violation, r.oracle_violation);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-consistent viscous regularization of the Euler equations"};
  app.require_subcommand(1);

  std::string config;
  int levels = 3;
  double gamma = 1.4, rho = 1.0, e = 1.0, alpha = 0.0, a = 0.0, d = 1.0;

  auto* run = app.add_subcommand("run", "Run a scenario and its certificates");
  run->add_option("config", config, "Scenario INI file")->required();

  auto* refine = app.add_subcommand("refine", "Grid refinement study of a scenario");
  refine->add_option("config", config, "Scenario INI file")->required();
  refine->add_option("--levels", levels, "Number of levels (>= 3)");

  auto* check = app.add_subcommand("check-eos", "Thermodynamic quantities of an ideal gas state");
  check->add_option("--gamma", gamma)->required();
  check->add_option("--rho", rho)->required();
  check->add_option("--e", e)->required();

  auto* range = app.add_subcommand("range", "Admissible interval of x = 1 - a/d");
  range->add_option("--gamma", gamma)->required();
  range->add_option("--alpha", alpha)->required();
  range->add_option("--rho", rho);
  range->add_option("--e", e);

  auto* cex = app.add_subcommand("counterexample", "Entropy violation for a != d");
  cex->add_option("--gamma", gamma)->required();
  cex->add_option("--a", a)->required();
  cex->add_option("--d", d)->required();
  cex->add_option("--rho", rho);
  cex->add_option("--e", e);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*run) return cmd_run(config);
    if (*refine) return cmd_refine(config, levels);
    if (*check) return cmd_check_eos(gamma, rho, e);
    if (*range) return cmd_range(gamma, alpha, rho, e);
    if (*cex) return cmd_counterexample(gamma, a, d, rho, e);
  } catch (const visreg::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kConfigError;
  } catch (const visreg::BadParams& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kConfigError;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kRuntimeError;
  }
  return kRuntimeError;
}
