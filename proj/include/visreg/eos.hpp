#pragma once

// Entropy-based equation of state. Every thermodynamic quantity is derived
// from a specific entropy s(rho, e) and its first and second partials; the
// identities T ds = de + p d(1/rho) fix p and T from s_rho and s_e.
//
// All quantities are nondimensional. Positive pressure is NOT assumed.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "visreg/errors.hpp"
#include "visreg/linalg.hpp"

namespace visreg {

struct EntropyDerivatives {
  double s = 0.0;
  double s_rho = 0.0;
  double s_e = 0.0;
  double s_rhorho = 0.0;
  double s_rhoe = 0.0;
  double s_ee = 0.0;
};

class EosModel {
 public:
  enum class Kind { IdealGas, UserSupplied };
  using Evaluator = std::function<EntropyDerivatives(double rho, double e)>;

  /// Polytropic ideal gas, s = log(e^{1/(gamma-1)} / rho).
  static EosModel ideal_gas(double gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
      throw DomainError("ideal gas requires gamma > 1, got " + std::to_string(gamma));
    EosModel m;
    m.kind_ = Kind::IdealGas;
    m.gamma_ = gamma;
    m.name_ = "ideal";
    return m;
  }

  /// Any entropy function with analytic first/second derivatives.
  static EosModel user_supplied(std::string name, Evaluator evaluator) {
    if (!evaluator) throw BadParams("user-supplied EOS needs an evaluator");
    EosModel m;
    m.kind_ = Kind::UserSupplied;
    m.name_ = std::move(name);
    m.evaluator_ = std::move(evaluator);
    return m;
  }

  Kind kind() const { return kind_; }
  bool is_ideal_gas() const { return kind_ == Kind::IdealGas; }
  const std::string& name() const { return name_; }

  double gamma() const {
    if (kind_ != Kind::IdealGas) throw BadEos("gamma is only defined for the ideal gas");
    return gamma_;
  }

  EntropyDerivatives entropy(double rho, double e) const {
    if (kind_ == Kind::IdealGas) {
      const double g1 = gamma_ - 1.0;
      EntropyDerivatives d;
      d.s = std::log(e) / g1 - std::log(rho);
      d.s_rho = -1.0 / rho;
      d.s_e = 1.0 / (g1 * e);
      d.s_rhorho = 1.0 / (rho * rho);
      d.s_rhoe = 0.0;
      d.s_ee = -1.0 / (g1 * e * e);
      return d;
    }
    return evaluator_(rho, e);
  }

  double specific_entropy(double rho, double e) const {
    if (kind_ == Kind::IdealGas) return std::log(e) / (gamma_ - 1.0) - std::log(rho);
    return evaluator_(rho, e).s;
  }

  /// p = -rho^2 s_rho / s_e.
  double pressure(double rho, double e) const {
    if (kind_ == Kind::IdealGas) return (gamma_ - 1.0) * rho * e;
    const auto d = evaluator_(rho, e);
    return -rho * rho * d.s_rho / d.s_e;
  }

  double temperature(double rho, double e) const {
    if (kind_ == Kind::IdealGas) return (gamma_ - 1.0) * e;
    return 1.0 / evaluator_(rho, e).s_e;
  }

  /// c^2 = p_rho - (s_rho / s_e) p_e, no admissibility checks.
  double sound_speed_squared(double rho, double e) const;

 private:
  EosModel() = default;

  Kind kind_ = Kind::IdealGas;
  double gamma_ = 0.0;
  std::string name_;
  Evaluator evaluator_;
};

/// Pointwise thermodynamic quantities at one (rho, e).
struct ThermoDerivs {
  double rho = 0.0;
  double e = 0.0;
  EntropyDerivatives sd;
  double d_rho2_s_rho = 0.0;  // d/drho (rho^2 s_rho)
  double p = 0.0;
  double T = 0.0;
  double p_rho = 0.0;
  double p_e = 0.0;
  double T_rho = 0.0;
  double T_e = 0.0;
  double c2 = 0.0;
  double cp = 0.0;
  Sym2 sigma;                    // entropy Hessian in (1/rho, e), scaled by rho
  double det_sigma = 0.0;        // direct determinant
  double det_sigma_via_T = 0.0;  // s_e^3 (p_rho T_e - p_e T_rho)
  Sym2 h2;                       // alpha = 1
};

namespace detail {

struct RawThermo {
  double q;  // d/drho (rho^2 s_rho)
  double p, T, p_rho, p_e, T_rho, T_e, c2;
  double pT_jac;  // p_rho T_e - p_e T_rho
};

inline RawThermo raw_thermo(double rho, const EntropyDerivatives& d) {
  RawThermo r{};
  const double se2 = d.s_e * d.s_e;
  r.q = 2.0 * rho * d.s_rho + rho * rho * d.s_rhorho;
  r.p = -rho * rho * d.s_rho / d.s_e;
  r.T = 1.0 / d.s_e;
  r.p_e = rho * rho * (d.s_rho * d.s_ee - d.s_e * d.s_rhoe) / se2;
  r.p_rho = (rho * rho * d.s_rho * d.s_rhoe - d.s_e * r.q) / se2;
  r.T_e = -d.s_ee / se2;
  r.T_rho = -d.s_rhoe / se2;
  r.c2 = r.p_rho - (d.s_rho / d.s_e) * r.p_e;
  r.pT_jac = r.p_rho * r.T_e - r.p_e * r.T_rho;
  return r;
}

}  // namespace detail

inline double EosModel::sound_speed_squared(double rho, double e) const {
  if (kind_ == Kind::IdealGas) return gamma_ * (gamma_ - 1.0) * e;
  return detail::raw_thermo(rho, evaluator_(rho, e)).c2;
}

/// H_2^alpha: entries built with alpha c_p^{-1} in place of c_p^{-1}.
/// alpha = 1 is the degenerate (det = 0) matrix.
inline Sym2 h2_matrix(const ThermoDerivs& t, double alpha) {
  if (!(alpha <= 1.0)) throw DomainError("h2_matrix requires alpha <= 1");
  const auto& d = t.sd;
  const double k = alpha / t.cp;
  Sym2 h;
  h.a11 = k * d.s_rho * d.s_rho + t.d_rho2_s_rho / (t.rho * t.rho);
  h.a12 = k * d.s_rho * d.s_e + d.s_rhoe;
  h.a22 = k * d.s_e * d.s_e + d.s_ee;
  return h;
}

inline ThermoDerivs thermo_eval(double rho, double e, const EosModel& eos) {
  if (!(rho > 0.0) || !(e > 0.0))
    throw DomainError("thermo_eval requires rho > 0 and e > 0 (rho=" + std::to_string(rho) +
                      ", e=" + std::to_string(e) + ")");
  ThermoDerivs t;
  t.rho = rho;
  t.e = e;
  t.sd = eos.entropy(rho, e);
  const auto& d = t.sd;
  if (!(d.s_e > 0.0)) throw NonAdmissibleState("non-positive temperature: s_e <= 0");

  const auto r = detail::raw_thermo(rho, d);
  t.d_rho2_s_rho = r.q;
  const double det_direct = r.q * d.s_ee - rho * rho * d.s_rhoe * d.s_rhoe;
  if (!(r.q < 0.0) || !(d.s_ee < 0.0) || !(det_direct > 0.0))
    throw NonAdmissibleState("entropy is not strictly concave in (1/rho, e) at rho=" +
                             std::to_string(rho) + ", e=" + std::to_string(e));

  t.p = r.p;
  t.T = r.T;
  t.p_rho = r.p_rho;
  t.p_e = r.p_e;
  t.T_rho = r.T_rho;
  t.T_e = r.T_e;
  t.c2 = r.c2;
  t.cp = (r.p_rho * d.s_e - r.p_e * d.s_rho) / (d.s_e * r.pT_jac);
  t.sigma = Sym2{r.q / rho, rho * d.s_rhoe, rho * d.s_ee};
  t.det_sigma = t.sigma.det();
  t.det_sigma_via_T = d.s_e * d.s_e * d.s_e * r.pT_jac;

  // Permanent self-check of the derivative evaluators: both routes to
  // det(Sigma) are algebraically identical.
  const double scale =
      std::max({std::abs(det_direct), std::abs(r.q * d.s_ee) + rho * rho * d.s_rhoe * d.s_rhoe,
                d.s_e * d.s_e * d.s_e * (std::abs(r.p_rho * r.T_e) + std::abs(r.p_e * r.T_rho))});
  if (!(std::abs(t.det_sigma - t.det_sigma_via_T) <= 1e-10 * scale))
    throw BadEos("inconsistent entropy derivatives: det(Sigma) routes disagree");

  t.h2 = h2_matrix(t, 1.0);
  return t;
}

struct AdmissibilityReport {
  bool convex = false;
  bool positive_temperature = false;
  bool hyperbolic = false;
  double cp_Te = std::numeric_limits<double>::quiet_NaN();
  double c2 = std::numeric_limits<double>::quiet_NaN();
};

/// Report-valued; never throws.
inline AdmissibilityReport check_admissibility(double rho, double e, const EosModel& eos) noexcept {
  AdmissibilityReport rep;
  if (!(rho > 0.0) || !(e > 0.0)) return rep;
  EntropyDerivatives d;
  try {
    d = eos.entropy(rho, e);
  } catch (...) {
    return rep;
  }
  const double q = 2.0 * rho * d.s_rho + rho * rho * d.s_rhorho;
  rep.convex = q < 0.0 && d.s_ee < 0.0 && (q * d.s_ee - rho * rho * d.s_rhoe * d.s_rhoe) > 0.0;
  rep.positive_temperature = d.s_e > 0.0;
  if (!rep.positive_temperature) return rep;
  const auto r = detail::raw_thermo(rho, d);
  rep.c2 = r.c2;
  rep.hyperbolic = r.c2 > 0.0;
  const double cp = (r.p_rho * d.s_e - r.p_e * d.s_rho) / (d.s_e * r.pT_jac);
  rep.cp_Te = cp * r.T_e;
  return rep;
}

/// Solves p(rho, e) = p for e by Newton iteration (closed form for ideal gas).
inline double internal_energy_from_pressure(const EosModel& eos, double rho, double p,
                                            double e_guess = 1.0) {
  if (!(rho > 0.0)) throw DomainError("internal_energy_from_pressure requires rho > 0");
  if (eos.is_ideal_gas()) {
    const double e = p / ((eos.gamma() - 1.0) * rho);
    if (!(e > 0.0)) throw DomainError("ideal gas requires p > 0 for e > 0");
    return e;
  }
  double e = e_guess;
  for (int it = 0; it < 100; ++it) {
    const auto r = detail::raw_thermo(rho, eos.entropy(rho, e));
    const double f = r.p - p;
    if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(p))) return e;
    if (!(r.p_e != 0.0)) throw BadEos("p_e = 0 while inverting p(rho, e)");
    double step = f / r.p_e;
    if (!std::isfinite(step)) throw BadEos("non-finite Newton step while inverting p(rho, e)");
    for (int k = 0; !(e - step > 0.0) || !std::isfinite(eos.entropy(rho, e - step).s); ++k) {
      if (k == 60) throw BadEos("p(rho, e) inversion left the domain");
      step *= 0.5;
    }
    e -= step;
  }
  throw BadEos("p(rho, e) inversion did not converge");
}

/// Inverts (T, s) -> (rho, e). Possible wherever p_e != 0 since
/// rho^2 det D(T, s)/D(rho, e) = p_e.
inline std::pair<double, double> state_from_temperature_entropy(const EosModel& eos, double T,
                                                                double s, double rho_guess = 1.0,
                                                                double e_guess = 1.0) {
  if (!(T > 0.0)) throw DomainError("temperature must be positive");
  if (eos.is_ideal_gas()) {
    const double g1 = eos.gamma() - 1.0;
    const double e = T / g1;
    return {std::pow(e, 1.0 / g1) * std::exp(-s), e};
  }
  double rho = rho_guess, e = e_guess;
  for (int it = 0; it < 100; ++it) {
    const auto d = eos.entropy(rho, e);
    const auto r = detail::raw_thermo(rho, d);
    const double f1 = r.T - T, f2 = d.s - s;
    if (std::abs(f1) <= 1e-14 * T && std::abs(f2) <= 1e-14 * std::max(1.0, std::abs(s)))
      return {rho, e};
    const double jac = r.T_rho * d.s_e - r.T_e * d.s_rho;  // = p_e / rho^2
    if (!(jac != 0.0)) throw BadEos("p_e = 0: (T, s) are not independent state variables");
    double drho = (f1 * d.s_e - r.T_e * f2) / jac;
    double de = (r.T_rho * f2 - d.s_rho * f1) / jac;
    if (!std::isfinite(drho) || !std::isfinite(de))
      throw BadEos("non-finite Newton step while inverting (T, s)");
    // Backtrack until the trial state is inside the EOS domain and the
    // scaled residual decreases.
    auto merit = [&](double r, double en) {
      if (!(r > 0.0) || !(en > 0.0)) return std::numeric_limits<double>::infinity();
      const auto dt = eos.entropy(r, en);
      if (!std::isfinite(dt.s) || !(dt.s_e > 0.0)) return std::numeric_limits<double>::infinity();
      const double g1 = (1.0 / dt.s_e - T) / T, g2 = dt.s - s;
      return g1 * g1 + g2 * g2;
    };
    const double m0 = (f1 / T) * (f1 / T) + f2 * f2;
    double lam = 1.0;
    for (int k = 0; !(merit(rho - lam * drho, e - lam * de) <= (1.0 - 1e-4 * lam) * m0); ++k) {
      if (k == 60) throw BadEos("(T, s) inversion stalled");
      lam *= 0.5;
    }
    rho -= lam * drho;
    e -= lam * de;
  }
  throw BadEos("(T, s) inversion did not converge");
}

/// Finite-difference audit of an EOS derivative evaluator against an
/// independent scalar entropy function.
struct DerivativeAudit {
  std::array<double, 5> error_h{};   // s_rho, s_e, s_rhorho, s_rhoe, s_ee at step h
  std::array<double, 5> error_h2{};  // same at step h/2
  double min_order = 0.0;            // min over derivatives of log2(error_h / error_h2)
};

inline DerivativeAudit audit_derivatives(const EosModel& eos,
                                         const std::function<double(double, double)>& entropy,
                                         double rho, double e, double rel_step = 1e-2) {
  auto fd = [&](double hr, double he) {
    const double s0 = entropy(rho, e);
    std::array<double, 5> v{};
    v[0] = (entropy(rho + hr, e) - entropy(rho - hr, e)) / (2 * hr);
    v[1] = (entropy(rho, e + he) - entropy(rho, e - he)) / (2 * he);
    v[2] = (entropy(rho + hr, e) - 2 * s0 + entropy(rho - hr, e)) / (hr * hr);
    v[3] = (entropy(rho + hr, e + he) - entropy(rho + hr, e - he) - entropy(rho - hr, e + he) +
            entropy(rho - hr, e - he)) /
           (4 * hr * he);
    v[4] = (entropy(rho, e + he) - 2 * s0 + entropy(rho, e - he)) / (he * he);
    return v;
  };
  const auto d = eos.entropy(rho, e);
  const std::array<double, 5> exact{d.s_rho, d.s_e, d.s_rhorho, d.s_rhoe, d.s_ee};
  const double hr = rel_step * rho, he = rel_step * e;
  const auto a = fd(hr, he);
  const auto b = fd(0.5 * hr, 0.5 * he);
  DerivativeAudit out;
  out.min_order = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5; ++k) {
    out.error_h[k] = std::abs(a[k] - exact[k]);
    out.error_h2[k] = std::abs(b[k] - exact[k]);
    const double scale = std::max(1.0, std::abs(exact[k]));
    // A derivative that the stencil reproduces to round-off carries no order information.
    if (out.error_h[k] <= 1e-11 * scale) continue;
    out.min_order = std::min(out.min_order, std::log2(out.error_h[k] / out.error_h2[k]));
  }
  return out;
}

}  // namespace visreg
