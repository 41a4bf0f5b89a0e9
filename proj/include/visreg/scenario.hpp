#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "visreg/config.hpp"
#include "visreg/diagnostics.hpp"
#include "visreg/initial_conditions.hpp"
#include "visreg/io.hpp"
#include "visreg/solver.hpp"

namespace visreg {

struct ScenarioResult {
  std::vector<Certificate> certificates;
  std::vector<ManifestEntry> snapshots;
  std::filesystem::path output_dir;
  long steps = 0;
  double dt_max = 0.0;
  int exit_status = 0;  // 0 all certificates pass, 1 otherwise
};

/// VISREG_OUTPUT_DIR overrides the configured directory.
inline std::filesystem::path output_directory(const ScenarioConfig& cfg) {
  if (const char* env = std::getenv("VISREG_OUTPUT_DIR"); env && *env) return env;
  return cfg.directory;
}

inline RegularizationCoeffs coeffs_from_config(const ScenarioConfig& cfg) {
  RegularizationCoeffs c;
  c.a = cfg.resolved_a();
  c.d = cfg.d;
  c.gform = parse_momentum_viscosity(cfg.gform);
  c.mu = cfg.resolved_mu();
  c.lambda_visc = cfg.lambda_visc;
  return c;
}

inline SchemeSpec scheme_from_config(const ScenarioConfig& cfg) {
  SchemeSpec s;
  s.scheme = parse_scheme(cfg.scheme);
  s.integrator = parse_integrator(cfg.integrator);
  s.cfl = cfg.cfl;
  s.viscfactor = cfg.viscfactor;
  s.epsilon = cfg.epsilon;
  s.mesh_c0 = cfg.c0;
  s.check_stride = cfg.check_stride;
  return s;
}

inline EntropyFamily family_from_certificate(const std::string& name, const ScenarioConfig& cfg,
                                             const EosModel& eos) {
  if (name == "entropy_physical") return EntropyFamily::physical();
  if (name.rfind("entropy_harten:", 0) == 0) return EntropyFamily::harten(std::stod(name.substr(15)));
  if (name == "entropy_crafted") {
    try {
      return a_neq_d_counterexample(cfg.crafted_rho, cfg.crafted_e, cfg.resolved_a(), cfg.d, eos, 5).family;
    } catch (const NoCounterexample& e) {
      throw ConfigError(std::string("entropy_crafted needs a != d: ") + e.what());
    }
  }
  throw ConfigError("not an entropy certificate: " + name);
}

namespace detail {

template <int Dim>
ConservedField<Dim> scenario_initial_field(const ScenarioConfig& cfg, const EosModel& eos, int n) {
  Grid<Dim> g;
  for (int k = 0; k < Dim; ++k) {
    g.n[k] = n;
    g.lo[k] = cfg.lo;
    g.hi[k] = cfg.hi;
  }
  g.boundary = parse_boundary(cfg.boundary);
  g.validate();

  if (cfg.ic_kind == "counterexample") {
    if constexpr (Dim == 1) {
      if (std::abs(cfg.lo + cfg.hi) > 1e-12 * (cfg.hi - cfg.lo))
        throw ConfigError("counterexample grids must be symmetric about 0");
      if (n % 2 == 0) throw ConfigError("counterexample grids need an odd n");
      const double rs = param_or(cfg.ic_params, "rho_star", 1.0);
      const double es = param_or(cfg.ic_params, "e_star", 1.0);
      return a_neq_d_counterexample(rs, es, cfg.resolved_a(), cfg.d, eos, n, cfg.hi).field;
    }
    throw ConfigError("counterexample initial data are 1D");
  }
  IcSpec<Dim> ic;
  ic.kind = cfg.ic_kind;
  ic.params = cfg.ic_params;
  if (cfg.ic_kind == "random_riemann") {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ic.kind = "riemann";
    ic.params = {{"rho_l", 0.1 + 1.9 * U(rng)}, {"u_l", 2.0 * U(rng) - 1.0}, {"p_l", 0.1 + 1.9 * U(rng)},
                 {"rho_r", 0.1 + 1.9 * U(rng)}, {"u_r", 2.0 * U(rng) - 1.0}, {"p_r", 0.1 + 1.9 * U(rng)},
                 {"x0", param_or(cfg.ic_params, "x0", 0.5 * (cfg.lo + cfg.hi))}};
  }
  return initial_condition<Dim>(ic, g, eos);
}

template <int Dim>
struct SimOutput {
  std::vector<Certificate> certificates;
  std::vector<ManifestEntry> snapshots;
  ConservedField<Dim> final_state;
  long steps = 0;
  double dt_max = 0.0;
};

template <int Dim>
SimOutput<Dim> simulate(const ScenarioConfig& cfg, int n, const std::filesystem::path* outdir) {
  cfg.validate();
  const auto eos = EosModel::ideal_gas(cfg.gamma);
  const auto coeffs = coeffs_from_config(cfg);
  const auto scheme = scheme_from_config(cfg);
  const auto U0 = scenario_initial_field<Dim>(cfg, eos, n);

  std::unique_ptr<MinEntropyMonitor<Dim>> min_s;
  std::unique_ptr<PositivityMonitor<Dim>> pos;
  std::vector<std::unique_ptr<EntropyResidualMonitor<Dim>>> residuals;
  std::vector<std::string> residual_names;
  for (const auto& name : cfg.certificates) {
    if (name == "min_entropy") {
      min_s = std::make_unique<MinEntropyMonitor<Dim>>(eos);
    } else if (name == "positivity") {
      pos = std::make_unique<PositivityMonitor<Dim>>();
    } else {
      residuals.push_back(std::make_unique<EntropyResidualMonitor<Dim>>(
          family_from_certificate(name, cfg, eos), coeffs, eos, scheme, cfg.residual_c));
      residual_names.push_back(name);
    }
  }

  SimOutput<Dim> out;
  std::vector<double> running_min(U0.cells(), std::numeric_limits<double>::infinity());
  long step = 0;
  double t_prev = U0.t;
  auto snapshot = [&](const ConservedField<Dim>& U) {
    if (!outdir) return;
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06ld.csv", step);
    write_snapshot_csv<Dim>(*outdir / name, U, eos, running_min);
    out.snapshots.push_back({step, U.t, name});
  };
  auto collect = [&]() {
    std::vector<Certificate> certs;
    for (const auto& name : cfg.certificates) {
      if (name == "min_entropy" && min_s) certs.push_back(min_s->certificate(cfg.min_entropy_rel));
      if (name == "positivity" && pos) certs.push_back(pos->certificate());
    }
    for (std::size_t i = 0; i < residuals.size(); ++i) certs.push_back(residuals[i]->certificate(residual_names[i]));
    return certs;
  };
  auto flush = [&](const std::vector<Certificate>& certs) {
    if (!outdir) return;
    write_manifest(*outdir / "manifest.csv", out.snapshots);
    write_certificates(*outdir / "certificates.txt", certs);
  };

  AdvanceOptions<Dim> opt;
  opt.on_state = [&](const ConservedField<Dim>& U) {
    if (U.t > t_prev) {
      out.dt_max = std::max(out.dt_max, U.t - t_prev);
      ++step;
    }
    t_prev = U.t;
    for (int c = 0; c < U.cells(); ++c)
      running_min[c] = std::min(running_min[c], eos.specific_entropy(U.rho[c], U.internal_energy(c)));
    if (min_s) min_s->observe(U);
    if (pos) pos->observe(U);
    for (auto& r : residuals) r->observe(U);
    const bool final = !(U.t < cfg.t_end);
    if (step == 0 || final || (cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0)) snapshot(U);
  };
  opt.on_failure = [&](const ConservedField<Dim>& bad) {
    if (pos) pos->observe(bad);
  };

  if (outdir) std::filesystem::create_directories(*outdir);
  try {
    auto traj = advance<Dim>(U0, scheme, coeffs, eos, cfg.t_end, opt);
    out.final_state = traj.states.back();
    out.steps = traj.steps;
  } catch (const Error&) {
    flush(collect());
    throw;
  }
  out.certificates = collect();
  flush(out.certificates);
  return out;
}

/// Mean of 2^Dim fine cells onto each coarse cell.
template <int Dim>
std::vector<double> restrict_to_coarse(const ConservedField<Dim>& fine, const Grid<Dim>& coarse) {
  std::vector<double> out(coarse.cells(), 0.0);
  const double w = 1.0 / (1 << Dim);
  for (int j = 0; j < fine.grid.ny(); ++j)
    for (int i = 0; i < fine.grid.nx(); ++i)
      out[coarse.index(i / 2, Dim == 2 ? j / 2 : 0)] += w * fine.rho[fine.grid.index(i, j)];
  return out;
}

}  // namespace detail

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  ScenarioResult r;
  r.output_dir = output_directory(cfg);
  auto fill = [&](auto&& sim) {
    r.certificates = std::move(sim.certificates);
    r.snapshots = std::move(sim.snapshots);
    r.steps = sim.steps;
    r.dt_max = sim.dt_max;
  };
  if (cfg.dim == 1)
    fill(detail::simulate<1>(cfg, cfg.n, &r.output_dir));
  else
    fill(detail::simulate<2>(cfg, cfg.n, &r.output_dir));
  r.exit_status = 0;
  for (const auto& c : r.certificates)
    if (!c.pass) r.exit_status = 1;
  return r;
}

struct RefinementRow {
  int level = 0;
  int n = 0;
  double h = 0.0;
  double dt_max = 0.0;
  double metric = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();
};

/// metric "self": L1 density difference to the next finer level (restricted
/// to the coarse grid); "violation": largest worst value among the entropy
/// residual certificates, or the first certificate if none is requested.
/// h halves per level, dt follows through the CFL condition.
inline std::vector<RefinementRow> refinement_study(const ScenarioConfig& cfg, int levels) {
  if (levels < 3) throw ConfigError("refinement needs at least 3 levels");
  cfg.validate();
  if (cfg.metric == "violation" && cfg.certificates.empty())
    throw ConfigError("metric 'violation' needs at least one certificate");
  std::vector<RefinementRow> rows;
  auto run = [&](auto dim_tag) {
    constexpr int Dim = decltype(dim_tag)::value;
    std::vector<detail::SimOutput<Dim>> sims;
    for (int l = 0; l < levels; ++l) sims.push_back(detail::simulate<Dim>(cfg, cfg.n << l, nullptr));
    const int nrows = cfg.metric == "self" ? levels - 1 : levels;
    for (int l = 0; l < nrows; ++l) {
      RefinementRow row;
      row.level = l;
      row.n = cfg.n << l;
      const auto& g = sims[l].final_state.grid;
      row.h = g.h_min();
      row.dt_max = sims[l].dt_max;
      if (cfg.metric == "self") {
        const auto fine = detail::restrict_to_coarse<Dim>(sims[l + 1].final_state, g);
        double e = 0.0;
        for (int c = 0; c < g.cells(); ++c) e += std::abs(fine[c] - sims[l].final_state.rho[c]);
        row.metric = e * g.cell_volume();
      } else {
        const auto& certs = sims[l].certificates;
        bool any = false;
        for (const auto& c : certs)
          if (c.name.rfind("entropy_", 0) == 0) {
            row.metric = any ? std::max(row.metric, c.worst) : c.worst;
            any = true;
          }
        if (!any) row.metric = certs.front().worst;
      }
      rows.push_back(row);
    }
  };
  if (cfg.dim == 1)
    run(std::integral_constant<int, 1>{});
  else
    run(std::integral_constant<int, 2>{});
  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].order = std::log(rows[i - 1].metric / rows[i].metric) / std::log(rows[i - 1].h / rows[i].h);
  return rows;
}

inline void write_refinement_table(const std::filesystem::path& path, const std::vector<RefinementRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "level,n,h,dt_max,metric,order\n";
  for (const auto& r : rows)
    out << r.level << ',' << r.n << ',' << fmt17(r.h) << ',' << fmt17(r.dt_max) << ',' << fmt17(r.metric) << ','
        << fmt17(r.order) << '\n';
}

}  // namespace visreg
