#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "visreg/eos.hpp"

using namespace visreg;

namespace {

// Stiffened gas written only through its entropy,
// s = ln(e - pi/rho) / (gamma - 1) - ln(rho), p = (gamma - 1) rho e - gamma pi.
struct Stiffened {
  double gamma, pi;
  double s(double rho, double e) const { return std::log(e - pi / rho) / (gamma - 1) - std::log(rho); }
  EntropyDerivatives derivs(double rho, double e) const {
    const double g1 = gamma - 1, w = e - pi / rho, k = pi / (rho * rho);
    EntropyDerivatives d;
    d.s = s(rho, e);
    d.s_rho = k / (g1 * w) - 1 / rho;
    d.s_e = 1 / (g1 * w);
    d.s_rhorho = (-2 * pi / (rho * rho * rho) / w - k * k / (w * w)) / g1 + 1 / (rho * rho);
    d.s_rhoe = -k / (g1 * w * w);
    d.s_ee = -1 / (g1 * w * w);
    return d;
  }
  EosModel model() const {
    auto self = *this;
    return EosModel::user_supplied("stiffened", [self](double r, double e) { return self.derivs(r, e); });
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

struct StateGen {
  std::mt19937_64 rng;
  explicit StateGen(std::uint64_t seed) : rng(seed) {}
  double log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
  }
  double pick(std::initializer_list<double> v) {
    std::uniform_int_distribution<std::size_t> i(0, v.size() - 1);
    return *(v.begin() + i(rng));
  }
};

}  // namespace

TEST(IdealGas, ClosedFormsAtReferenceState) {
  const double g = 1.4, rho = 2.0, e = 3.0;
  const auto t = thermo_eval(rho, e, EosModel::ideal_gas(g));
  EXPECT_NEAR(t.p, (g - 1) * rho * e, 1e-14);
  EXPECT_NEAR(t.T, (g - 1) * e, 1e-14);
  EXPECT_NEAR(t.c2, g * (g - 1) * e, 1e-13);
  EXPECT_NEAR(t.cp, g / (g - 1), 1e-13);
  EXPECT_NEAR(t.det_sigma, 1 / ((g - 1) * e * e), 1e-14);
  EXPECT_NEAR(t.T_e, g - 1, 1e-14);
  EXPECT_NEAR(t.T_rho, 0.0, 1e-15);
  EXPECT_NEAR(t.p_e, (g - 1) * rho, 1e-13);
  EXPECT_NEAR(t.p_rho, (g - 1) * e, 1e-13);
  EXPECT_NEAR(t.cp * t.T_e, g, 1e-13);
  EXPECT_NEAR(t.sd.s, std::log(e) / (g - 1) - std::log(rho), 1e-14);
}

TEST(IdealGas, RejectsGammaAtMostOne) {
  EXPECT_THROW(EosModel::ideal_gas(1.0), DomainError);
  EXPECT_THROW(EosModel::ideal_gas(0.5), DomainError);
}

TEST(IdealGas, DomainErrors) {
  const auto eos = EosModel::ideal_gas(1.4);
  EXPECT_THROW(thermo_eval(0.0, 1.0, eos), DomainError);
  EXPECT_THROW(thermo_eval(1.0, -1.0, eos), DomainError);
  EXPECT_THROW(h2_matrix(thermo_eval(1, 1, eos), 1.5), DomainError);
}

TEST(IdealGas, IdentityPropertiesOnRandomStates) {
  StateGen gen(7);
  for (int i = 0; i < 2000; ++i) {
    const double g = gen.pick({1.2, 1.4, 5.0 / 3.0, 2.0, 3.0});
    const double rho = gen.log_uniform(1e-3, 1e3), e = gen.log_uniform(1e-3, 1e3);
    const auto t = thermo_eval(rho, e, EosModel::ideal_gas(g));
    const auto& d = t.sd;
    EXPECT_LT(rel(t.p * d.s_e, -rho * rho * d.s_rho), 1e-12);
    EXPECT_LT(rel(t.cp * t.det_sigma, d.s_e * d.s_e * d.s_e * t.c2), 1e-10);
    EXPECT_LT(std::abs(t.h2.det()) / (t.h2.a11 * t.h2.a22 + t.h2.a12 * t.h2.a12 + 1e-300), 1e-10);
    EXPECT_LT(std::abs(t.h2.a22 * t.p_rho - t.h2.a12 * t.p_e) /
                  (std::abs(t.h2.a22 * t.p_rho) + std::abs(t.h2.a12 * t.p_e) + 1e-300),
              1e-10);
    EXPECT_LT(rel(t.cp * t.T_e, g), 1e-12);
    EXPECT_GT(t.cp * t.T_e, 1.0);
  }
}

TEST(StiffenedGas, DerivativeAuditSecondOrder) {
  const Stiffened sg{4.4, 0.6};
  const auto eos = sg.model();
  for (double rho : {0.5, 1.0, 3.0})
    for (double e : {1.0, 2.5}) {
      const auto audit =
          audit_derivatives(eos, [&](double r, double ee) { return sg.s(r, ee); }, rho, e, 1e-2);
      EXPECT_GE(audit.min_order, 1.9) << "rho=" << rho << " e=" << e;
    }
}

TEST(StiffenedGas, AuditCatchesWrongDerivative) {
  const Stiffened sg{4.4, 0.6};
  auto bad = EosModel::user_supplied("bad", [sg](double r, double e) {
    auto d = sg.derivs(r, e);
    d.s_ee *= 1.01;
    return d;
  });
  const auto audit = audit_derivatives(bad, [&](double r, double e) { return sg.s(r, e); }, 1.0, 2.0);
  EXPECT_LT(audit.min_order, 0.5);
}

TEST(StiffenedGas, PressureAndSoundSpeed) {
  const Stiffened sg{4.4, 0.6};
  const auto eos = sg.model();
  StateGen gen(11);
  for (int i = 0; i < 500; ++i) {
    const double rho = gen.log_uniform(0.2, 5.0);
    const double e = sg.pi / rho + gen.log_uniform(0.05, 10.0);
    const auto t = thermo_eval(rho, e, eos);
    const double p = (sg.gamma - 1) * rho * e - sg.gamma * sg.pi;
    EXPECT_LT(rel(t.p, p), 1e-12);
    EXPECT_LT(rel(t.c2, sg.gamma * (p + sg.pi) / rho), 1e-10);
    EXPECT_LT(rel(t.cp * t.det_sigma, t.sd.s_e * t.sd.s_e * t.sd.s_e * t.c2), 1e-9);
    EXPECT_LT(std::abs(t.h2.det()) / (std::abs(t.h2.a11 * t.h2.a22) + t.h2.a12 * t.h2.a12), 1e-9);
    EXPECT_GT(t.cp * t.T_e, 1.0);
  }
}

TEST(UserEos, NonConcaveEntropyIsRejected) {
  // s = ln(e) + ln(rho): s_rhorho < 0 breaks concavity in 1/rho.
  auto eos = EosModel::user_supplied("convex", [](double r, double e) {
    EntropyDerivatives d;
    d.s = std::log(e) + std::log(r);
    d.s_rho = 1 / r;
    d.s_e = 1 / e;
    d.s_rhorho = -1 / (r * r);
    d.s_ee = -1 / (e * e);
    return d;
  });
  EXPECT_THROW(thermo_eval(1.0, 1.0, eos), NonAdmissibleState);
  const auto rep = check_admissibility(1.0, 1.0, eos);
  EXPECT_FALSE(rep.convex);
  EXPECT_TRUE(rep.positive_temperature);
}

TEST(UserEos, NegativeTemperatureIsRejected) {
  auto eos = EosModel::user_supplied("neg", [](double r, double e) {
    EntropyDerivatives d;
    d.s = -std::log(e) - std::log(r);
    d.s_rho = -1 / r;
    d.s_e = -1 / e;
    d.s_rhorho = 1 / (r * r);
    d.s_ee = 1 / (e * e);
    return d;
  });
  EXPECT_THROW(thermo_eval(1.0, 1.0, eos), NonAdmissibleState);
  EXPECT_FALSE(check_admissibility(1.0, 1.0, eos).positive_temperature);
}

TEST(UserEos, InconsistentMixedDerivativeIsCaughtByAudit) {
  // A symmetric Hessian that no entropy function has at this point still
  // evaluates pointwise; only the audit against s itself exposes it.
  const auto gas = EosModel::ideal_gas(1.4);
  auto eos = EosModel::user_supplied("inconsistent", [gas](double r, double e) {
    auto d = gas.entropy(r, e);
    d.s_rhoe = 0.3;
    return d;
  });
  EXPECT_NO_THROW(thermo_eval(1.0, 1.0, eos));
  const auto s = [](double r, double e) { return std::log(e) / 0.4 - std::log(r); };
  EXPECT_LT(audit_derivatives(eos, s, 1.0, 1.0).min_order, 0.5);
  EXPECT_GT(audit_derivatives(gas, s, 1.0, 1.0).min_order, 1.9);
}

TEST(Admissibility, ReportNeverThrows) {
  const auto eos = EosModel::ideal_gas(1.4);
  EXPECT_FALSE(check_admissibility(-1.0, 1.0, eos).convex);
  EXPECT_FALSE(check_admissibility(1.0, 0.0, eos).positive_temperature);
  const auto ok = check_admissibility(1.0, 2.0, eos);
  EXPECT_TRUE(ok.convex && ok.positive_temperature && ok.hyperbolic);
  EXPECT_NEAR(ok.cp_Te, 1.4, 1e-12);
}

TEST(Inversions, PressureRoundTrip) {
  const Stiffened sg{4.4, 0.6};
  for (const auto& eos : {EosModel::ideal_gas(1.4), sg.model()}) {
    for (double rho : {0.3, 1.0, 4.0})
      for (double de : {1.0, 3.0}) {
        const double e = sg.pi / rho + de;  // inside the stiffened-gas domain
        const double p = eos.pressure(rho, e);
        EXPECT_NEAR(internal_energy_from_pressure(eos, rho, p, 1.1 * e), e, 1e-11 * e);
      }
  }
  EXPECT_THROW(internal_energy_from_pressure(EosModel::ideal_gas(1.4), 1.0, -1.0), DomainError);
}

TEST(Inversions, TemperatureEntropyRoundTrip) {
  const Stiffened sg{4.4, 0.6};
  for (const auto& eos : {EosModel::ideal_gas(1.4), sg.model()}) {
    for (double rho : {0.5, 1.0, 2.0})
      for (double e : {1.5, 3.0}) {
        const double T = eos.temperature(rho, e), s = eos.specific_entropy(rho, e);
        const auto [r2, e2] = state_from_temperature_entropy(eos, T, s, 1.0, 2.0);
        EXPECT_NEAR(r2, rho, 1e-10 * rho);
        EXPECT_NEAR(e2, e, 1e-10 * e);
      }
  }
}

TEST(Inversions, ZeroPeBlocksTemperatureEntropyCoordinates) {
  // s = ln(e - ln rho): p = rho independent of e, so p_e = 0.
  auto eos = EosModel::user_supplied("pe0", [](double r, double e) {
    const double w = e - std::log(r);
    EntropyDerivatives d;
    d.s = std::log(w);
    d.s_rho = -1 / (r * w);
    d.s_e = 1 / w;
    d.s_rhorho = 1 / (r * r * w) - 1 / (r * r * w * w);
    d.s_rhoe = 1 / (r * w * w);
    d.s_ee = -1 / (w * w);
    return d;
  });
  const auto t = thermo_eval(1.0, 2.0, eos);
  EXPECT_NEAR(t.p_e, 0.0, 1e-14);
  EXPECT_NEAR(t.p, 1.0, 1e-14);
  EXPECT_THROW(state_from_temperature_entropy(eos, 2.0, 0.5, 1.0, 2.0), BadEos);
}
