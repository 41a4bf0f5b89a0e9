#pragma once

// Viscous flux structure of the regularized Euler system
//
//   d_t rho + div m - div f = 0
//   d_t m + div(u (x) m) + grad p - div(G + f (x) u) = 0
//   d_t E + div(u (E + p)) - div(l + 1/2 |u|^2 f + G.u) = 0
//
// with f = a grad rho, l = s_e^{-1}(e s_e - rho s_rho) f + d rho s_e^{-1} grad s
// and G(grad^s u):grad u >= 0, together with the quadratic forms (J, N, M, S)
// that decide the minimum entropy principle and the entropy inequalities.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "visreg/eos.hpp"
#include "visreg/errors.hpp"
#include "visreg/linalg.hpp"

namespace visreg {

/// A scalar coefficient field c(rho, e): a constant or a pure callback.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(double value) : value_(value) {}  // NOLINT: implicit by intent
  explicit CoefficientField(std::function<double(double, double)> fn) : fn_(std::move(fn)) {}

  double operator()(double rho, double e) const { return fn_ ? fn_(rho, e) : value_; }
  bool is_constant() const { return !fn_; }
  double constant_value() const {
    if (fn_) throw BadParams("coefficient field is not constant");
    return value_;
  }

 private:
  double value_ = 0.0;
  std::function<double(double, double)> fn_;
};

enum class MomentumViscosity {
  Parabolic,  // G = a rho grad u
  Symmetric,  // G = 2 mu rho grad^s u + lambda' rho (div u) I
  Zero,
};

inline std::string to_string(MomentumViscosity g) {
  switch (g) {
    case MomentumViscosity::Parabolic: return "parabolic";
    case MomentumViscosity::Symmetric: return "symmetric";
    case MomentumViscosity::Zero: return "zero";
  }
  return "?";
}

inline MomentumViscosity parse_momentum_viscosity(const std::string& s) {
  if (s == "parabolic") return MomentumViscosity::Parabolic;
  if (s == "symmetric") return MomentumViscosity::Symmetric;
  if (s == "zero") return MomentumViscosity::Zero;
  throw BadParams("unknown gform '" + s + "'");
}

struct RegularizationCoeffs {
  CoefficientField a = 0.0;
  CoefficientField d = 0.0;
  MomentumViscosity gform = MomentumViscosity::Parabolic;
  CoefficientField mu = 0.0;  // used by Symmetric only
  double lambda_visc = 0.0;   // second viscosity lambda', Symmetric only

  /// a = d = value with the parabolic momentum viscosity.
  static RegularizationCoeffs uniform(double value,
                                      MomentumViscosity g = MomentumViscosity::Parabolic) {
    RegularizationCoeffs c;
    c.a = value;
    c.d = value;
    c.gform = g;
    c.mu = 0.5 * value;
    return c;
  }

  /// Checks the sign constraints that can be checked without a state.
  void validate(int space_dim) const {
    auto nonneg = [](const CoefficientField& c, const char* what) {
      if (c.is_constant() && !(c.constant_value() >= 0.0))
        throw BadParams(std::string(what) + " must be >= 0");
    };
    nonneg(a, "a");
    nonneg(d, "d");
    if (gform == MomentumViscosity::Symmetric) {
      nonneg(mu, "mu");
      if (mu.is_constant() && !(2.0 * mu.constant_value() + space_dim * lambda_visc >= 0.0))
        throw BadParams("symmetric viscosity requires 2 mu + dim lambda' >= 0");
    }
  }
};

/// Momentum viscosity tensor G for a given velocity gradient.
template <int Dim>
Tensor<Dim> momentum_viscosity(MomentumViscosity gform, double a, double mu, double lambda_visc,
                               double rho, const Tensor<Dim>& grad_u) {
  Tensor<Dim> G{};
  switch (gform) {
    case MomentumViscosity::Parabolic:
      for (int i = 0; i < Dim; ++i)
        for (int j = 0; j < Dim; ++j) G[i][j] = a * rho * grad_u[i][j];
      break;
    case MomentumViscosity::Symmetric: {
      const double div = trace<Dim>(grad_u);
      for (int i = 0; i < Dim; ++i)
        for (int j = 0; j < Dim; ++j)
          G[i][j] = mu * rho * (grad_u[i][j] + grad_u[j][i]) + (i == j ? lambda_visc * rho * div : 0.0);
      break;
    }
    case MomentumViscosity::Zero:
      break;
  }
  return G;
}

template <int Dim>
struct ViscousFluxes {
  Vec<Dim> f{};        // mass flux a grad rho
  Tensor<Dim> G{};     // momentum viscosity
  Vec<Dim> l{};        // l per its defining formula
  Vec<Dim> l_alt1{};   // (d - a) rho s_rho s_e^{-1} grad rho + a e grad rho + d rho grad e
  Vec<Dim> l_alt2{};   // (a - d)(p / rho + e) grad rho + d grad(rho e)
  Tensor<Dim> g{};     // G + f (x) u
  Vec<Dim> h{};        // l - 1/2 |u|^2 f
  double l_form_discrepancy = 0.0;  // max relative gap among the three forms of l
};

template <int Dim>
ViscousFluxes<Dim> viscous_fluxes(double rho, double e, const Vec<Dim>& u, const Vec<Dim>& grad_rho,
                                  const Vec<Dim>& grad_e, const Tensor<Dim>& grad_u,
                                  const RegularizationCoeffs& coeffs, const EosModel& eos) {
  const auto t = thermo_eval(rho, e, eos);
  const auto& sd = t.sd;
  const double a = coeffs.a(rho, e);
  const double d = coeffs.d(rho, e);
  const double mu = coeffs.mu(rho, e);

  ViscousFluxes<Dim> out;
  Vec<Dim> grad_s{};
  for (int i = 0; i < Dim; ++i) {
    out.f[i] = a * grad_rho[i];
    grad_s[i] = sd.s_rho * grad_rho[i] + sd.s_e * grad_e[i];
  }
  const double conv = (e * sd.s_e - rho * sd.s_rho) / sd.s_e;
  double lscale = 0.0;
  for (int i = 0; i < Dim; ++i) {
    out.l[i] = conv * out.f[i] + d * rho * grad_s[i] / sd.s_e;
    out.l_alt1[i] = (d - a) * rho * sd.s_rho / sd.s_e * grad_rho[i] + a * e * grad_rho[i] +
                    d * rho * grad_e[i];
    out.l_alt2[i] = (a - d) * (t.p / rho + e) * grad_rho[i] +
                    d * (e * grad_rho[i] + rho * grad_e[i]);
    lscale = std::max({lscale, std::abs(conv * out.f[i]), std::abs(d * rho * grad_s[i] / sd.s_e),
                       std::abs(a * e * grad_rho[i]), std::abs(d * rho * grad_e[i])});
  }
  double gap = 0.0;
  for (int i = 0; i < Dim; ++i)
    gap = std::max({gap, std::abs(out.l[i] - out.l_alt1[i]), std::abs(out.l[i] - out.l_alt2[i])});
  out.l_form_discrepancy = lscale > 0.0 ? gap / lscale : gap;

  out.G = momentum_viscosity<Dim>(coeffs.gform, a, mu, coeffs.lambda_visc, rho, grad_u);
  const double u2 = norm2<Dim>(u);
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) out.g[i][j] = out.G[i][j] + out.f[i] * u[j];
    out.h[i] = out.l[i] - 0.5 * u2 * out.f[i];
  }
  return out;
}

/// Coefficients of the block matrix N with J = (grad rho, grad e) N (grad rho, grad e)^T.
inline Sym2 n_matrix(const ThermoDerivs& t, double a, double d) {
  const auto& sd = t.sd;
  const double rho = t.rho;
  Sym2 n;
  n.a11 = (d - a) * rho * sd.s_rho * sd.s_rhoe / sd.s_e + a * t.d_rho2_s_rho / rho;
  n.a12 = 0.5 * ((d - a) * rho * sd.s_rho * sd.s_ee / sd.s_e + (d + a) * rho * sd.s_rhoe);
  n.a22 = d * rho * sd.s_ee;
  return n;
}

/// Q = N(a = 0, d = 1); its form is (rho / s_e) grad s_e . grad s.
inline Sym2 q_matrix(const ThermoDerivs& t) { return n_matrix(t, 0.0, 1.0); }

struct JEvaluation {
  double direct = 0.0;   // from the flux definitions
  double via_n = 0.0;    // (grad rho, grad e) N (grad rho, grad e)^T
  Sym2 n;
};

template <int Dim>
JEvaluation quadratic_form_J(double rho, double e, const Vec<Dim>& grad_rho, const Vec<Dim>& grad_e,
                             double a, double d, const EosModel& eos) {
  const auto t = thermo_eval(rho, e, eos);
  const auto& sd = t.sd;
  double J = 0.0;
  for (int i = 0; i < Dim; ++i) {
    const double f = a * grad_rho[i];
    const double ds_e = sd.s_rhoe * grad_rho[i] + sd.s_ee * grad_e[i];
    const double ds_rho = sd.s_rhorho * grad_rho[i] + sd.s_rhoe * grad_e[i];
    const double ds = sd.s_rho * grad_rho[i] + sd.s_e * grad_e[i];
    const double d_conv = sd.s_e * grad_e[i] + e * ds_e - sd.s_rho * grad_rho[i] - rho * ds_rho;
    const double l = (e * sd.s_e - rho * sd.s_rho) / sd.s_e * f + d * rho * ds / sd.s_e;
    J += -f * d_conv + l * ds_e + a * grad_rho[i] * ds;
  }
  JEvaluation out;
  out.direct = J;
  out.n = n_matrix(t, a, d);
  out.via_n = out.n.template quad<Dim>(grad_rho, grad_e);
  return out;
}

/// J + lambda d (rho / s_e) grad s_e . grad s with d (1 + lambda) = a.
/// Non-positive for every admissible state; strictly negative when a, d > 0
/// and the gradients do not vanish.
template <int Dim>
double shifted_form(double rho, double e, const Vec<Dim>& grad_rho, const Vec<Dim>& grad_e,
                    double a, double d, const EosModel& eos) {
  if (!(d > 0.0)) throw DegenerateCoefficient("lambda is undefined for d = 0");
  const auto t = thermo_eval(rho, e, eos);
  const double lambda = a / d - 1.0;
  const double J = quadratic_form_J<Dim>(rho, e, grad_rho, grad_e, a, d, eos).direct;
  return J + lambda * d * q_matrix(t).template quad<Dim>(grad_rho, grad_e);
}

struct MMatrixReport {
  double lambda = 0.0;     // d (1 + lambda) = a
  Sym2 m;                  // N + lambda d Q
  double det_M2 = 0.0;     // closed form a d' det(Sigma) - 1/4 (d' - a)^2 rho^-2 s_e^2 p_e^2, d' = a
  double det_M2_direct = 0.0;
  double m22 = 0.0;
  double lambda0_lhs = 0.0;  // a d det(Sigma) - 1/4 (d - a)^2 rho^-2 s_e^2 p_e^2
  bool negative_semidefinite = false;  // J itself (lambda = 0)
};

inline MMatrixReport m_matrix_check(double rho, double e, double a, double d, const EosModel& eos) {
  if (!(d > 0.0))
    throw DegenerateCoefficient("m_matrix_check: d = 0, the lambda shift is undefined");
  const auto t = thermo_eval(rho, e, eos);
  MMatrixReport r;
  r.lambda = a / d - 1.0;
  const Sym2 n = n_matrix(t, a, d);
  const Sym2 q = q_matrix(t);
  r.m = Sym2{n.a11 + r.lambda * d * q.a11, n.a12 + r.lambda * d * q.a12,
             n.a22 + r.lambda * d * q.a22};
  const double dprime = d * (1.0 + r.lambda);
  const double pe_term = t.sd.s_e * t.sd.s_e * t.p_e * t.p_e / (rho * rho);
  r.det_M2 = a * dprime * t.det_sigma - 0.25 * (dprime - a) * (dprime - a) * pe_term;
  r.det_M2_direct = r.m.det();
  r.m22 = r.m.a22;
  r.lambda0_lhs = a * d * t.det_sigma - 0.25 * (d - a) * (d - a) * pe_term;
  r.negative_semidefinite = n.a22 <= 0.0 && r.lambda0_lhs >= 0.0;
  return r;
}

struct SMatrixReport {
  double x = 0.0;  // 1 - a / d
  double alpha = 1.0;
  Sym2 s2;
  double det_S2 = 0.0;            // from the entries
  double det_S2_closed = 0.0;     // closed form in x, alpha
  bool negative_semidefinite = false;
};

/// Closed form of det(S_2^alpha) obtained by expanding the determinant with
/// det(H_2^alpha) = (1 - alpha) rho^-2 det(Sigma) and
/// s_e (h22 p_rho - h12 p_e) = -(1 - alpha) det(Sigma).
inline double s_matrix_det_closed_form(const ThermoDerivs& t, double x, double alpha) {
  const double rho2 = t.rho * t.rho;
  const double pe_term = t.sd.s_e * t.sd.s_e * t.p_e * t.p_e / rho2;
  return ((1.0 - alpha) * t.det_sigma * (1.0 - x) - 0.25 * x * x * pe_term) / rho2;
}

inline SMatrixReport s_matrix(double rho, double e, double a, double d, double alpha,
                              const EosModel& eos) {
  if (!(d > 0.0)) throw DegenerateCoefficient("s_matrix: d = 0");
  if (!(alpha <= 1.0)) throw DomainError("s_matrix requires alpha <= 1");
  const auto t = thermo_eval(rho, e, eos);
  SMatrixReport r;
  r.x = 1.0 - a / d;
  r.alpha = alpha;
  const Sym2 h = h2_matrix(t, alpha);
  const double k = r.x * t.sd.s_e / (rho * rho);
  r.s2 = Sym2{h.a11 + k * t.p_rho, h.a12 + 0.5 * k * t.p_e, h.a22};
  r.det_S2 = r.s2.det();
  r.det_S2_closed = s_matrix_det_closed_form(t, r.x, alpha);
  // Semi-definite iff s22 <= 0 and det >= 0; the det test carries a
  // round-off allowance relative to the entries.
  const double scale = r.s2.a11 * r.s2.a11 + 2.0 * r.s2.a12 * r.s2.a12 + r.s2.a22 * r.s2.a22;
  r.negative_semidefinite = r.s2.a22 <= 0.0 && r.s2.a11 <= 0.0 && r.det_S2 >= -1e-12 * scale;
  return r;
}

/// Bounds 2 Gamma -/+ 2 sqrt(Delta) with Gamma = (1 - alpha) det(Sigma) rho^2 s_e^-2 p_e^-2
/// and Delta = Gamma (1 + Gamma).
///
/// Expanding det(S_2^alpha) directly gives the positivity condition
/// (1 - alpha) det(Sigma)(1 - x) > 1/4 x^2 rho^-2 s_e^2 p_e^2 for x = 1 - a/d,
/// i.e. x in (-hi, -lo). admits() applies that condition; lo/hi are the
/// bounds themselves.
struct RatioBounds {
  double gamma_coef = 0.0;
  double delta = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double ratio_lo() const { return -hi; }
  double ratio_hi() const { return -lo; }
  /// x = 1 - a/d for which det(S_2^alpha) > 0.
  bool admits(double x) const { return x > ratio_lo() && x < ratio_hi(); }
  /// Closed version, det(S_2^alpha) >= 0; for alpha = 1 only x = 0.
  bool admits_semidefinite(double x) const { return x >= ratio_lo() && x <= ratio_hi(); }
};

inline RatioBounds admissible_range(double rho, double e, double alpha, const EosModel& eos) {
  if (!(alpha <= 1.0)) throw DomainError("admissible_range requires alpha <= 1");
  const auto t = thermo_eval(rho, e, eos);
  RatioBounds b;
  if (t.p_e == 0.0) {
    // The quadratic term vanishes; det(S^alpha) > 0 reduces to x < 1.
    b.gamma_coef = std::numeric_limits<double>::infinity();
    b.delta = std::numeric_limits<double>::infinity();
    b.lo = -1.0;
    b.hi = std::numeric_limits<double>::infinity();
    return b;
  }
  b.gamma_coef = (1.0 - alpha) * t.det_sigma * rho * rho / (t.sd.s_e * t.sd.s_e * t.p_e * t.p_e);
  b.delta = b.gamma_coef * (1.0 + b.gamma_coef);
  const double root = std::sqrt(b.delta);
  b.lo = 2.0 * b.gamma_coef - 2.0 * root;
  b.hi = 2.0 * b.gamma_coef + 2.0 * root;
  return b;
}

/// Mass velocity u_m = u - f / rho.
template <int Dim>
Vec<Dim> mass_velocity(const Vec<Dim>& u, double rho, const Vec<Dim>& f) {
  if (!(rho > 0.0)) throw DomainError("mass_velocity requires rho > 0");
  Vec<Dim> um{};
  for (int i = 0; i < Dim; ++i) um[i] = u[i] - f[i] / rho;
  return um;
}

}  // namespace visreg
