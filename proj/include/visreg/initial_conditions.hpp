#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "visreg/eos.hpp"
#include "visreg/errors.hpp"
#include "visreg/grid.hpp"

namespace visreg {

template <int Dim>
struct PrimitiveState {
  double rho = 1.0;
  Vec<Dim> u{};
  double p = 1.0;
};

/// kind: riemann | contact | smooth | constant | custom.
///
///   riemann   rho_l u_l p_l rho_r u_r p_r (required), v_l v_r x0 width (default 0);
///             the jump sits at x = x0 and the state is uniform in y; width > 0
///             blends the primitive states with 1/2 (1 + tanh((x - x0) / width))
///   contact   beta (1), p (1), rho_l (1), rho_r (2), x0 (0)
///   smooth    rho0 (1), rho_amp (0.1), u0 (0), u_amp (0), v0 (0), p0 (1), p_amp (0);
///             one period of sin/cos per axis
///   constant  rho (1), u (0), v (0), p (1)
///   custom    `custom` callback evaluated at cell centres
template <int Dim>
struct IcSpec {
  std::string kind = "constant";
  std::map<std::string, double> params;
  std::function<PrimitiveState<Dim>(const Vec<Dim>&)> custom;
};

namespace detail {

inline double param(const std::map<std::string, double>& p, const std::string& key,
                    const std::string& kind) {
  auto it = p.find(key);
  if (it == p.end()) throw BadParams(kind + " initial condition needs '" + key + "'");
  return it->second;
}

inline double param_or(const std::map<std::string, double>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

inline void reject_unknown(const std::map<std::string, double>& p, const std::set<std::string>& known,
                           const std::string& kind) {
  for (const auto& [k, v] : p)
    if (!known.count(k)) throw BadParams("unknown " + kind + " parameter '" + k + "'");
}

}  // namespace detail

template <int Dim>
ConservedField<Dim> field_from_primitive(const Grid<Dim>& grid, const EosModel& eos,
                                         const std::function<PrimitiveState<Dim>(const Vec<Dim>&)>& prim) {
  grid.validate();
  auto f = ConservedField<Dim>::zeros(grid);
  for (int c = 0; c < grid.cells(); ++c) {
    const auto w = prim(grid.center_of(c));
    if (!(w.rho > 0.0)) throw BadParams("initial density must be positive");
    double e;
    try {
      e = internal_energy_from_pressure(eos, w.rho, w.p);
    } catch (const Error& ex) {
      throw BadParams(std::string("initial pressure not invertible: ") + ex.what());
    }
    f.rho[c] = w.rho;
    double ke = 0.0;
    for (int k = 0; k < Dim; ++k) {
      f.m[k][c] = w.rho * w.u[k];
      ke += w.u[k] * w.u[k];
    }
    f.E[c] = w.rho * (e + 0.5 * ke);
  }
  if (grid.boundary == Boundary::Farfield) attach_farfield(f);
  return f;
}

template <int Dim>
ConservedField<Dim> initial_condition(const IcSpec<Dim>& spec, const Grid<Dim>& grid, const EosModel& eos) {
  using detail::param;
  using detail::param_or;
  const auto& P = spec.params;
  const std::string& kind = spec.kind;
  std::function<PrimitiveState<Dim>(const Vec<Dim>&)> prim;

  if (kind == "riemann") {
    detail::reject_unknown(P, {"rho_l", "u_l", "p_l", "rho_r", "u_r", "p_r", "v_l", "v_r", "x0", "width"}, kind);
    PrimitiveState<Dim> L, R;
    L.rho = param(P, "rho_l", kind);
    L.u[0] = param(P, "u_l", kind);
    L.p = param(P, "p_l", kind);
    R.rho = param(P, "rho_r", kind);
    R.u[0] = param(P, "u_r", kind);
    R.p = param(P, "p_r", kind);
    if constexpr (Dim == 2) {
      L.u[1] = param_or(P, "v_l", 0.0);
      R.u[1] = param_or(P, "v_r", 0.0);
    }
    const double x0 = param_or(P, "x0", 0.0);
    const double width = param_or(P, "width", 0.0);
    if (!(width >= 0.0)) throw BadParams("riemann width must be >= 0");
    prim = [=](const Vec<Dim>& x) {
      if (width == 0.0) return x[0] < x0 ? L : R;
      const double w = 0.5 * (1.0 + std::tanh((x[0] - x0) / width));
      PrimitiveState<Dim> m;
      m.rho = (1 - w) * L.rho + w * R.rho;
      for (int k = 0; k < Dim; ++k) m.u[k] = (1 - w) * L.u[k] + w * R.u[k];
      m.p = (1 - w) * L.p + w * R.p;
      return m;
    };
  } else if (kind == "contact") {
    detail::reject_unknown(P, {"beta", "p", "rho_l", "rho_r", "x0"}, kind);
    const double beta = param_or(P, "beta", 1.0), p = param_or(P, "p", 1.0);
    const double rl = param_or(P, "rho_l", 1.0), rr = param_or(P, "rho_r", 2.0);
    const double x0 = param_or(P, "x0", 0.0);
    prim = [=](const Vec<Dim>& x) {
      PrimitiveState<Dim> w;
      w.rho = x[0] < x0 ? rl : rr;
      w.u[0] = beta;
      w.p = p;
      return w;
    };
  } else if (kind == "smooth") {
    detail::reject_unknown(P, {"rho0", "rho_amp", "u0", "u_amp", "v0", "p0", "p_amp"}, kind);
    const double r0 = param_or(P, "rho0", 1.0), ra = param_or(P, "rho_amp", 0.1);
    const double u0 = param_or(P, "u0", 0.0), ua = param_or(P, "u_amp", 0.0);
    const double v0 = param_or(P, "v0", 0.0);
    const double p0 = param_or(P, "p0", 1.0), pa = param_or(P, "p_amp", 0.0);
    const auto lo = grid.lo, hi = grid.hi;
    prim = [=](const Vec<Dim>& x) {
      double sn = 1.0, cs = 1.0;
      for (int k = 0; k < Dim; ++k) {
        const double th = 2.0 * std::numbers::pi * (x[k] - lo[k]) / (hi[k] - lo[k]);
        sn *= std::sin(th + k * 0.5 * std::numbers::pi);
        cs *= std::cos(th);
      }
      PrimitiveState<Dim> w;
      w.rho = r0 + ra * sn;
      w.u[0] = u0 + ua * cs;
      if constexpr (Dim == 2) w.u[1] = v0;
      w.p = p0 + pa * cs;
      return w;
    };
  } else if (kind == "constant") {
    detail::reject_unknown(P, {"rho", "u", "v", "p"}, kind);
    PrimitiveState<Dim> w;
    w.rho = param_or(P, "rho", 1.0);
    w.u[0] = param_or(P, "u", 0.0);
    if constexpr (Dim == 2) w.u[1] = param_or(P, "v", 0.0);
    w.p = param_or(P, "p", 1.0);
    prim = [=](const Vec<Dim>&) { return w; };
  } else if (kind == "custom") {
    if (!spec.custom) throw BadParams("custom initial condition needs a callback");
    prim = spec.custom;
  } else {
    throw BadParams("unknown initial condition kind '" + kind + "'");
  }
  return field_from_primitive<Dim>(grid, eos, prim);
}

}  // namespace visreg
