#pragma once

// Explicit finite-volume style discretization on a padded cell array.
// Every flux lives on a cell face: centred averages for the Euler part,
// arithmetic-mean coefficients and compact normal differences for the
// viscous part, averaged centred differences for tangential gradients.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "visreg/eos.hpp"
#include "visreg/errors.hpp"
#include "visreg/grid.hpp"
#include "visreg/regularization.hpp"

namespace visreg {

enum class SchemeKind { GpRegularized, GpBrenner, Lax, Parabolic };
enum class Integrator { ForwardEuler, SspRk2, SspRk3 };
enum class RhsForm { Conservative, Brenner };

inline std::string to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::GpRegularized: return "gp-regularized";
    case SchemeKind::GpBrenner: return "gp-brenner";
    case SchemeKind::Lax: return "lax";
    case SchemeKind::Parabolic: return "parabolic";
  }
  return "?";
}

inline SchemeKind parse_scheme(const std::string& s) {
  if (s == "gp-regularized") return SchemeKind::GpRegularized;
  if (s == "gp-brenner") return SchemeKind::GpBrenner;
  if (s == "lax") return SchemeKind::Lax;
  if (s == "parabolic") return SchemeKind::Parabolic;
  throw BadParams("unknown scheme '" + s + "'");
}

inline std::string to_string(Integrator i) {
  switch (i) {
    case Integrator::ForwardEuler: return "forward-euler";
    case Integrator::SspRk2: return "ssp-rk2";
    case Integrator::SspRk3: return "ssp-rk3";
  }
  return "?";
}

inline Integrator parse_integrator(const std::string& s) {
  if (s == "forward-euler") return Integrator::ForwardEuler;
  if (s == "ssp-rk2") return Integrator::SspRk2;
  if (s == "ssp-rk3") return Integrator::SspRk3;
  throw BadParams("unknown integrator '" + s + "'");
}

struct SchemeSpec {
  SchemeKind scheme = SchemeKind::GpRegularized;
  Integrator integrator = Integrator::SspRk3;
  double cfl = 0.5;
  double viscfactor = 1.0;
  double epsilon = 0.0;           // parabolic scheme, unless mesh_c0 is set
  std::optional<double> mesh_c0;  // a = d = eps = c0 h max(|u| + c), refreshed every step
  int check_stride = 1;           // admissibility check every k accepted steps

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw BadParams("cfl must lie in (0, 1]");
    if (!(viscfactor > 0.0 && viscfactor <= 1.0)) throw BadParams("viscfactor must lie in (0, 1]");
    if (!(epsilon >= 0.0)) throw BadParams("epsilon must be >= 0");
    if (mesh_c0 && !(*mesh_c0 >= 0.0)) throw BadParams("c0 must be >= 0");
    if (check_stride < 1) throw BadParams("check_stride must be >= 1");
  }
};

/// Adds a source to `tendency` given the state (whose .t is the stage time).
template <int Dim>
using SourceFn = std::function<void(const ConservedField<Dim>&, ConservedField<Dim>&)>;

namespace detail {

/// Conserved and primitive variables on the padded layout.
template <int Dim>
struct Padded {
  Layout<Dim> L;
  std::vector<double> rho, E, e, p;
  std::array<std::vector<double>, Dim> m, u;
  std::vector<double> a, d, mu;

  explicit Padded(const Grid<Dim>& g) : L(g) {}
};

template <int Dim>
Padded<Dim> make_padded(const ConservedField<Dim>& f, const EosModel& eos,
                        const RegularizationCoeffs* coeffs) {
  Padded<Dim> S(f.grid);
  const FarfieldGhosts* gh =
      f.grid.boundary == Boundary::Farfield && f.farfield ? f.farfield.get() : nullptr;
  pad<Dim>(f.grid, f.rho, gh ? &gh->rho : nullptr, S.rho);
  for (int k = 0; k < Dim; ++k) pad<Dim>(f.grid, f.m[k], gh ? &gh->m[k] : nullptr, S.m[k]);
  pad<Dim>(f.grid, f.E, gh ? &gh->E : nullptr, S.E);

  const int n = S.L.size();
  S.e.resize(n);
  S.p.resize(n);
  for (int k = 0; k < Dim; ++k) S.u[k].resize(n);
  if (coeffs) {
    S.a.resize(n);
    S.d.resize(n);
    S.mu.resize(n);
  }
  for (int q = 0; q < n; ++q) {
    const double r = S.rho[q];
    if (!(r > 0.0)) {
      std::ostringstream os;
      os << "non-positive density " << r << " at padded cell " << q << ", t=" << f.t;
      throw NonAdmissibleState(os.str());
    }
    double ke = 0.0;
    for (int k = 0; k < Dim; ++k) {
      S.u[k][q] = S.m[k][q] / r;
      ke += S.u[k][q] * S.u[k][q];
    }
    S.e[q] = S.E[q] / r - 0.5 * ke;
    if (!(S.e[q] > 0.0)) {
      std::ostringstream os;
      os << "non-positive internal energy " << S.e[q] << " at padded cell " << q << ", t=" << f.t;
      throw NonAdmissibleState(os.str());
    }
    S.p[q] = eos.pressure(r, S.e[q]);
    if (coeffs) {
      S.a[q] = coeffs->a(r, S.e[q]);
      S.d[q] = coeffs->d(r, S.e[q]);
      S.mu[q] = coeffs->mu(r, S.e[q]);
    }
  }
  return S;
}

/// Euler flux along axis k of padded cell q, written into F[0..Dim+1].
template <int Dim>
void euler_flux(const Padded<Dim>& S, int k, int q, std::array<double, Dim + 2>& F) {
  const double uk = S.u[k][q];
  F[0] = S.m[k][q];
  for (int j = 0; j < Dim; ++j) F[1 + j] = S.m[j][q] * uk + (j == k ? S.p[q] : 0.0);
  F[Dim + 1] = uk * (S.E[q] + S.p[q]);
}

/// Velocity gradient at the face between padded cells qL and qR = qL + stride(k).
template <int Dim>
Tensor<Dim> face_velocity_gradient(const Padded<Dim>& S, const Grid<Dim>& g, int k, int qL, int qR,
                                   bool need_tangential) {
  Tensor<Dim> gu{};
  const double h = g.h(k);
  for (int j = 0; j < Dim; ++j) gu[k][j] = (S.u[j][qR] - S.u[j][qL]) / h;
  if (need_tangential) {
    for (int t = 0; t < Dim; ++t) {
      if (t == k) continue;
      const int st = S.L.stride(t);
      const double ht = g.h(t);
      for (int j = 0; j < Dim; ++j) {
        const double dL = (S.u[j][qL + st] - S.u[j][qL - st]) / (2.0 * ht);
        const double dR = (S.u[j][qR + st] - S.u[j][qR - st]) / (2.0 * ht);
        gu[t][j] = 0.5 * (dL + dR);
      }
    }
  }
  return gu;
}

/// Sums face fluxes into the tendency -div F.
template <int Dim, class FaceFlux>
ConservedField<Dim> assemble(const Padded<Dim>& S, const ConservedField<Dim>& field, FaceFlux&& flux) {
  auto out = ConservedField<Dim>::zeros(field.grid);
  out.t = field.t;
  const auto& L = S.L;
  const auto& g = field.grid;
  std::array<double, Dim + 2> F{};
  auto deposit = [&](int c, double sign) {
    out.rho[c] += sign * F[0];
    for (int j = 0; j < Dim; ++j) out.m[j][c] += sign * F[1 + j];
    out.E[c] += sign * F[Dim + 1];
  };
  for (int k = 0; k < Dim; ++k) {
    const double inv_h = 1.0 / g.h(k);
    const int nk = k == 0 ? L.nx : L.ny;
    const int no = k == 0 ? L.ny : L.nx;
    for (int o = 0; o < no; ++o) {
      for (int ik = -1; ik < nk; ++ik) {
        const int i = k == 0 ? ik : o, j = k == 0 ? o : ik;
        const int qL = L.at(i, j);
        const int qR = qL + L.stride(k);
        flux(k, qL, qR, F);
        for (auto& x : F) x *= inv_h;
        if (ik >= 0) deposit(g.index(i, j), -1.0);
        if (ik + 1 < nk) deposit(k == 0 ? g.index(ik + 1, o) : g.index(o, ik + 1), 1.0);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Tendency of the regularized system in conservative or two-velocity form.
template <int Dim>
ConservedField<Dim> rhs_regularized(const ConservedField<Dim>& field, const RegularizationCoeffs& coeffs,
                                    const EosModel& eos, RhsForm form = RhsForm::Conservative) {
  const auto S = detail::make_padded<Dim>(field, eos, &coeffs);
  const auto& g = field.grid;
  const bool tangential = Dim > 1 && coeffs.gform == MomentumViscosity::Symmetric;

  auto face = [&](int k, int qL, int qR, std::array<double, Dim + 2>& F) {
    const double h = g.h(k);
    const double rb = 0.5 * (S.rho[qL] + S.rho[qR]);
    const double eb = 0.5 * (S.e[qL] + S.e[qR]);
    const double ab = 0.5 * (S.a[qL] + S.a[qR]);
    const double db = 0.5 * (S.d[qL] + S.d[qR]);
    const double mub = 0.5 * (S.mu[qL] + S.mu[qR]);
    const double de = (S.e[qR] - S.e[qL]) / h;
    Vec<Dim> ub{};
    for (int j = 0; j < Dim; ++j) ub[j] = 0.5 * (S.u[j][qL] + S.u[j][qR]);
    const auto gu = detail::face_velocity_gradient<Dim>(S, g, k, qL, qR, tangential);
    const auto G = momentum_viscosity<Dim>(coeffs.gform, ab, mub, coeffs.lambda_visc, rb, gu);
    double Gu = 0.0;
    for (int j = 0; j < Dim; ++j) Gu += G[k][j] * ub[j];

    if (form == RhsForm::Conservative) {
      std::array<double, Dim + 2> FL, FR;
      detail::euler_flux<Dim>(S, k, qL, FL);
      detail::euler_flux<Dim>(S, k, qR, FR);
      const double drho = (S.rho[qR] - S.rho[qL]) / h;
      const double f = ab * drho;
      const double pr = 0.5 * (S.p[qL] / S.rho[qL] + S.p[qR] / S.rho[qR]);
      double u2 = 0.0;
      for (int j = 0; j < Dim; ++j) u2 += 0.5 * (S.u[j][qL] * S.u[j][qL] + S.u[j][qR] * S.u[j][qR]);
      const double l = (ab - db) * pr * drho + ab * eb * drho + db * rb * de;
      F[0] = 0.5 * (FL[0] + FR[0]) - f;
      for (int j = 0; j < Dim; ++j) F[1 + j] = 0.5 * (FL[1 + j] + FR[1 + j]) - (G[k][j] + f * ub[j]);
      F[Dim + 1] = 0.5 * (FL[Dim + 1] + FR[Dim + 1]) - (l + 0.5 * u2 * f + Gu);
    } else {
      const double dlr = (std::log(S.rho[qR]) - std::log(S.rho[qL])) / h;
      const double um = ub[k] - ab * dlr;
      const double pb = 0.5 * (S.p[qL] + S.p[qR]);
      const double Eb = 0.5 * (S.E[qL] + S.E[qR]);
      const double q = (ab - db) * pb * dlr + db * rb * de;
      F[0] = rb * um;
      for (int j = 0; j < Dim; ++j) {
        const double mb = 0.5 * (S.m[j][qL] + S.m[j][qR]);
        F[1 + j] = um * mb + (j == k ? pb : 0.0) - G[k][j];
      }
      F[Dim + 1] = um * Eb + pb * ub[k] - q - Gu;
    }
  };
  return detail::assemble<Dim>(S, field, face);
}

/// Centred Euler fluxes plus eps * Laplacian of every conserved variable.
template <int Dim>
ConservedField<Dim> rhs_parabolic(const ConservedField<Dim>& field, double epsilon, const EosModel& eos) {
  if (!(epsilon >= 0.0)) throw BadParams("epsilon must be >= 0");
  const auto S = detail::make_padded<Dim>(field, eos, nullptr);
  const auto& g = field.grid;
  auto face = [&](int k, int qL, int qR, std::array<double, Dim + 2>& F) {
    const double c = epsilon / g.h(k);
    std::array<double, Dim + 2> FL, FR;
    detail::euler_flux<Dim>(S, k, qL, FL);
    detail::euler_flux<Dim>(S, k, qR, FR);
    F[0] = 0.5 * (FL[0] + FR[0]) - c * (S.rho[qR] - S.rho[qL]);
    for (int j = 0; j < Dim; ++j) F[1 + j] = 0.5 * (FL[1 + j] + FR[1 + j]) - c * (S.m[j][qR] - S.m[j][qL]);
    F[Dim + 1] = 0.5 * (FL[Dim + 1] + FR[Dim + 1]) - c * (S.E[qR] - S.E[qL]);
  };
  return detail::assemble<Dim>(S, field, face);
}

/// Throws NonAdmissibleState at the first cell with rho <= 0, e <= 0 or a
/// non-admissible thermodynamic state.
template <int Dim>
void check_field_admissible(const ConservedField<Dim>& f, const EosModel& eos) {
  for (int c = 0; c < f.cells(); ++c) {
    const double r = f.rho[c];
    const double e = r > 0.0 ? f.internal_energy(c) : std::numeric_limits<double>::quiet_NaN();
    const auto rep = check_admissibility(r, e, eos);
    if (!(r > 0.0) || !(e > 0.0) || !rep.convex || !rep.positive_temperature) {
      std::ostringstream os;
      os << "non-admissible state at cell " << c << ", t=" << f.t << " (rho=" << r << ", e=" << e << ")";
      throw NonAdmissibleState(os.str());
    }
  }
}

template <int Dim>
ConservedField<Dim> parabolic_step(const ConservedField<Dim>& field, double epsilon, double dt,
                                   const EosModel& eos) {
  auto out = field;
  out.add_scaled(dt, rhs_parabolic<Dim>(field, epsilon, eos));
  out.t = field.t + dt;
  return out;
}

/// U_i <- (U_{i+1} + U_{i-1}) / 2 - dt / (2h) (F(U_{i+1}) - F(U_{i-1})).
inline ConservedField<1> lax_step(const ConservedField<1>& field, double dt, const EosModel& eos) {
  const auto S = detail::make_padded<1>(field, eos, nullptr);
  const double lam = dt / field.grid.h(0);
  auto out = field;
  std::array<double, 3> Fm, Fp;
  for (int i = 0; i < field.grid.nx(); ++i) {
    const int q = S.L.at(i);
    detail::euler_flux<1>(S, 0, q - 1, Fm);
    detail::euler_flux<1>(S, 0, q + 1, Fp);
    out.rho[i] = 0.5 * (S.rho[q + 1] + S.rho[q - 1]) - 0.5 * lam * (Fp[0] - Fm[0]);
    out.m[0][i] = 0.5 * (S.m[0][q + 1] + S.m[0][q - 1]) - 0.5 * lam * (Fp[1] - Fm[1]);
    out.E[i] = 0.5 * (S.E[q + 1] + S.E[q - 1]) - 0.5 * lam * (Fp[2] - Fm[2]);
  }
  out.t = field.t + dt;
  check_field_admissible<1>(out, eos);
  return out;
}

/// max over cells of |u| + c.
template <int Dim>
double max_wave_speed(const ConservedField<Dim>& f, const EosModel& eos) {
  double beta = 0.0;
  for (int c = 0; c < f.cells(); ++c) {
    const double e = f.internal_energy(c);
    const double c2 = eos.sound_speed_squared(f.rho[c], e);
    beta = std::max(beta, std::sqrt(norm2<Dim>(f.velocity(c))) + std::sqrt(std::max(c2, 0.0)));
  }
  return beta;
}

template <int Dim>
struct Trajectory {
  std::vector<ConservedField<Dim>> states;
  long steps = 0;
};

template <int Dim>
struct AdvanceOptions {
  std::function<void(const ConservedField<Dim>&)> on_state;    // initial and every accepted state
  std::function<void(const ConservedField<Dim>&)> on_failure;  // offending state before StepFailure
  int record_stride = 0;  // keep every k-th accepted state; 0 keeps initial and final only
  SourceFn<Dim> source;
  double fixed_dt = 0.0;  // > 0 overrides the stability estimate (still clipped to t_end)
  long max_steps = 50'000'000;
};

/// Coefficients in force for one step given the current wave speed.
template <int Dim>
RegularizationCoeffs step_coeffs(const SchemeSpec& scheme, const RegularizationCoeffs& coeffs,
                                 double beta, const Grid<Dim>& g) {
  if (!scheme.mesh_c0) return coeffs;
  const double v = *scheme.mesh_c0 * g.h_min() * beta;
  RegularizationCoeffs c = coeffs;
  c.a = v;
  c.d = v;
  c.mu = 0.5 * v;
  return c;
}

/// Largest diffusivity among a, d, 2 mu + |lambda'| over the field.
template <int Dim>
double max_diffusivity(const ConservedField<Dim>& f, const RegularizationCoeffs& c) {
  const bool constant = c.a.is_constant() && c.d.is_constant() && c.mu.is_constant();
  double D = 0.0;
  const int n = constant ? std::min(1, f.cells()) : f.cells();
  for (int q = 0; q < n; ++q) {
    const double e = f.internal_energy(q);
    D = std::max({D, c.a(f.rho[q], e), c.d(f.rho[q], e)});
    if (c.gform == MomentumViscosity::Symmetric)
      D = std::max(D, 2.0 * c.mu(f.rho[q], e) + std::abs(c.lambda_visc));
  }
  return D;
}

template <int Dim>
Trajectory<Dim> advance(const ConservedField<Dim>& initial, const SchemeSpec& scheme,
                        const RegularizationCoeffs& coeffs, const EosModel& eos, double t_end,
                        const AdvanceOptions<Dim>& opt = {}) {
  scheme.validate();
  coeffs.validate(Dim);
  if (scheme.scheme == SchemeKind::Lax && Dim != 1) throw BadParams("the lax scheme is 1D only");
  if (!(t_end >= initial.t)) throw BadParams("t_end precedes the initial time");

  Trajectory<Dim> traj;
  auto U = initial;
  if (U.grid.boundary == Boundary::Farfield && !U.farfield) attach_farfield(U);

  auto fail = [&](const ConservedField<Dim>& bad, const std::string& why) {
    if (opt.on_failure) opt.on_failure(bad);
    throw StepFailure(why);
  };
  try {
    check_field_admissible<Dim>(U, eos);
  } catch (const Error& ex) {
    fail(U, ex.what());
  }
  traj.states.push_back(U);
  if (opt.on_state) opt.on_state(U);

  const double h = U.grid.h_min();
  long step = 0;
  while (U.t < t_end) {
    if (step >= opt.max_steps) fail(U, "step limit reached");
    const double beta = max_wave_speed<Dim>(U, eos);
    const auto c = step_coeffs<Dim>(scheme, coeffs, beta, U.grid);
    double eps = 0.0;
    if (scheme.scheme == SchemeKind::Parabolic)
      eps = scheme.mesh_c0 ? *scheme.mesh_c0 * h * beta : scheme.epsilon;

    double dt = opt.fixed_dt;
    if (!(dt > 0.0)) {
      dt = beta > 0.0 ? scheme.cfl * h / beta : std::numeric_limits<double>::infinity();
      if (scheme.scheme != SchemeKind::Lax) {
        const double D = scheme.scheme == SchemeKind::Parabolic ? eps : max_diffusivity<Dim>(U, c);
        if (D > 0.0) dt = std::min(dt, scheme.viscfactor * h * h / (2.0 * Dim * D));
      }
    }
    dt = std::min(dt, t_end - U.t);
    if (!(dt >= 1e-14 * t_end) || !std::isfinite(dt)) {
      std::ostringstream os;
      os << "time step underflow (dt=" << dt << ") at t=" << U.t;
      fail(U, os.str());
    }

    auto L = [&](const ConservedField<Dim>& V) {
      ConservedField<Dim> r;
      switch (scheme.scheme) {
        case SchemeKind::GpRegularized: r = rhs_regularized<Dim>(V, c, eos, RhsForm::Conservative); break;
        case SchemeKind::GpBrenner: r = rhs_regularized<Dim>(V, c, eos, RhsForm::Brenner); break;
        default: r = rhs_parabolic<Dim>(V, eps, eos); break;
      }
      if (opt.source) opt.source(V, r);
      return r;
    };
    auto euler_stage = [&](const ConservedField<Dim>& V) {
      auto W = V;
      W.add_scaled(dt, L(V));
      return W;
    };

    const double t0 = U.t;
    ConservedField<Dim> next;
    try {
      if constexpr (Dim == 1) {
        if (scheme.scheme == SchemeKind::Lax) next = lax_step(U, dt, eos);
      }
      if (scheme.scheme != SchemeKind::Lax) {
        switch (scheme.integrator) {
          case Integrator::ForwardEuler:
            next = euler_stage(U);
            break;
          case Integrator::SspRk2: {
            auto U1 = euler_stage(U);
            U1.t = t0 + dt;
            next = ConservedField<Dim>::combine(0.5, U, 0.5, euler_stage(U1));
            break;
          }
          case Integrator::SspRk3: {
            auto U1 = euler_stage(U);
            U1.t = t0 + dt;
            auto U2 = ConservedField<Dim>::combine(0.75, U, 0.25, euler_stage(U1));
            U2.t = t0 + 0.5 * dt;
            next = ConservedField<Dim>::combine(1.0 / 3.0, U, 2.0 / 3.0, euler_stage(U2));
            break;
          }
        }
      }
      next.t = t0 + dt;
      if (next.t > t_end || t_end - next.t <= 1e-13 * std::max(1.0, std::abs(t_end))) next.t = t_end;
      ++step;
      if (step % scheme.check_stride == 0) check_field_admissible<Dim>(next, eos);
    } catch (const NonAdmissibleState& ex) {
      fail(next.rho.empty() ? U : next, ex.what());
    } catch (const DomainError& ex) {
      fail(next.rho.empty() ? U : next, ex.what());
    }
    U = std::move(next);
    if (opt.on_state) opt.on_state(U);
    const bool last = !(U.t < t_end);
    if (last || (opt.record_stride > 0 && step % opt.record_stride == 0)) traj.states.push_back(U);
  }
  traj.steps = step;
  return traj;
}

}  // namespace visreg
