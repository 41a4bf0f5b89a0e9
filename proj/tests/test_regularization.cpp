#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "visreg/regularization.hpp"

using namespace visreg;

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double gamma() {
    static constexpr double g[] = {1.2, 1.4, 5.0 / 3.0, 2.0, 3.0};
    return g[std::uniform_int_distribution<int>(0, 4)(rng)];
  }
  template <int Dim>
  Vec<Dim> vec(double scale) {
    Vec<Dim> v{};
    for (auto& x : v) x = uniform(-scale, scale);
    return v;
  }
  template <int Dim>
  Tensor<Dim> tensor(double scale) {
    Tensor<Dim> t{};
    for (auto& row : t)
      for (auto& x : row) x = uniform(-scale, scale);
    return t;
  }
};

Eigen::Matrix2d to_eigen(const Sym2& s) {
  Eigen::Matrix2d m;
  m << s.a11, s.a12, s.a12, s.a22;
  return m;
}

double max_eigenvalue(const Sym2& s) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(to_eigen(s)).eigenvalues()(1);
}

double scale_of(const Sym2& s) { return std::abs(s.a11) + std::abs(s.a12) + std::abs(s.a22); }

}  // namespace

TEST(ViscousFluxes, ThreeFormsOfLAgree) {
  Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    RegularizationCoeffs c;
    c.a = gen.uniform(0, 2);
    c.d = gen.uniform(0, 2);
    const auto vf = viscous_fluxes<2>(gen.log_uniform(0.01, 100), gen.log_uniform(0.01, 100), gen.vec<2>(3),
                                      gen.vec<2>(5), gen.vec<2>(5), gen.tensor<2>(5), c, eos);
    EXPECT_LT(vf.l_form_discrepancy, 1e-12);
  }
}

TEST(ViscousFluxes, ComponentsMatchDefinitions) {
  const auto eos = EosModel::ideal_gas(1.4);
  RegularizationCoeffs c;
  c.a = 0.3;
  c.d = 0.7;
  const double rho = 1.5, e = 2.0;
  const Vec<2> u{0.4, -0.2}, gr{1.0, -2.0}, ge{0.5, 0.25};
  const Tensor<2> gu{{{1.0, 2.0}, {3.0, 4.0}}};
  const auto vf = viscous_fluxes<2>(rho, e, u, gr, ge, gu, c, eos);
  // Ideal gas: l = (d - a)(rho s_rho / s_e) grad rho + a e grad rho + d rho grad e, rho s_rho / s_e = -(g-1) e.
  const double g1 = 0.4;
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(vf.f[i], 0.3 * gr[i]);
    const double l = (0.7 - 0.3) * (-g1 * e) * gr[i] + 0.3 * e * gr[i] + 0.7 * rho * ge[i];
    EXPECT_NEAR(vf.l[i], l, 1e-13);
    EXPECT_NEAR(vf.h[i], l - 0.5 * (0.16 + 0.04) * vf.f[i], 1e-13);
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(vf.G[i][j], 0.3 * rho * gu[i][j], 1e-14);
      EXPECT_NEAR(vf.g[i][j], vf.G[i][j] + vf.f[i] * u[j], 1e-14);
    }
  }
}

TEST(MomentumViscosity, SymmetricDissipationIsNonNegative) {
  Gen gen(2);
  for (int i = 0; i < 2000; ++i) {
    const double mu = gen.uniform(0, 2);
    const double lam = gen.uniform(-mu, 2);  // 2 mu + 2 lambda' >= 0 in 2D
    const auto gu = gen.tensor<2>(3);
    const auto G = momentum_viscosity<2>(MomentumViscosity::Symmetric, 0.0, mu, lam, 1.3, gu);
    double dissipation = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dissipation += G[a][b] * gu[a][b];
    EXPECT_GE(dissipation, -1e-12);
  }
}

TEST(MomentumViscosity, ZeroAndValidation) {
  const Tensor<1> gu{{{2.0}}};
  EXPECT_EQ(momentum_viscosity<1>(MomentumViscosity::Zero, 1.0, 1.0, 0.0, 1.0, gu)[0][0], 0.0);
  auto c = RegularizationCoeffs::uniform(1.0, MomentumViscosity::Symmetric);
  c.lambda_visc = -1.0;
  EXPECT_THROW(c.validate(2), BadParams);
  c.lambda_visc = -0.5;
  EXPECT_NO_THROW(c.validate(2));
  RegularizationCoeffs neg;
  neg.a = -1.0;
  EXPECT_THROW(neg.validate(1), BadParams);
  EXPECT_EQ(parse_momentum_viscosity(to_string(MomentumViscosity::Symmetric)), MomentumViscosity::Symmetric);
}

TEST(QuadraticFormJ, DirectEqualsBlockForm) {
  Gen gen(3);
  for (int i = 0; i < 2000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.01, 100), e = gen.log_uniform(0.01, 100);
    const auto gr = gen.vec<2>(rho), ge = gen.vec<2>(e);
    const double a = gen.uniform(0, 3), d = gen.uniform(0, 3);
    const auto J = quadratic_form_J<2>(rho, e, gr, ge, a, d, eos);
    const double scale = std::abs(J.n.a11) * dot<2>(gr, gr) + 2 * std::abs(J.n.a12) * std::abs(dot<2>(gr, ge)) +
                         std::abs(J.n.a22) * dot<2>(ge, ge);
    EXPECT_LE(std::abs(J.direct - J.via_n), 1e-11 * scale);
  }
}

TEST(QuadraticFormJ, QMatrixIsGradSeDotGradS) {
  Gen gen(4);
  for (int i = 0; i < 500; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.1, 10), e = gen.log_uniform(0.1, 10);
    const auto gr = gen.vec<1>(1), ge = gen.vec<1>(1);
    const auto t = thermo_eval(rho, e, eos);
    const double gse = t.sd.s_rhoe * gr[0] + t.sd.s_ee * ge[0];
    const double gs = t.sd.s_rho * gr[0] + t.sd.s_e * ge[0];
    const double direct = rho / t.sd.s_e * gse * gs;
    EXPECT_NEAR(q_matrix(t).quad<1>(gr, ge), direct, 1e-11 * (1 + std::abs(direct)));
  }
}

TEST(QuadraticFormJ, EqualCoefficientsGiveNonPositiveForm) {
  Gen gen(5);
  for (int i = 0; i < 2000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.01, 100), e = gen.log_uniform(0.01, 100);
    const double a = gen.log_uniform(1e-3, 10);
    const auto gr = gen.vec<2>(rho), ge = gen.vec<2>(e);
    const auto J = quadratic_form_J<2>(rho, e, gr, ge, a, a, eos);
    EXPECT_LE(max_eigenvalue(J.n), 1e-12 * scale_of(J.n));
    EXPECT_LE(J.direct, 1e-11 * scale_of(J.n) * (dot<2>(gr, gr) + dot<2>(ge, ge)));
  }
}

TEST(ShiftedForm, NonPositiveAndStrictForPositiveCoefficients) {
  Gen gen(6);
  for (int i = 0; i < 2000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.01, 100), e = gen.log_uniform(0.01, 100);
    const double a = gen.log_uniform(1e-3, 10), d = gen.log_uniform(1e-3, 10);
    const auto gr = gen.vec<2>(rho), ge = gen.vec<2>(e);
    EXPECT_LT(shifted_form<2>(rho, e, gr, ge, a, d, eos), 0.0);
  }
  EXPECT_THROW(shifted_form<1>(1.0, 1.0, Vec<1>{1.0}, Vec<1>{1.0}, 1.0, 0.0, EosModel::ideal_gas(1.4)),
               DegenerateCoefficient);
}

TEST(MMatrix, ClosedFormDeterminantAndEigenOracle) {
  Gen gen(7);
  for (int i = 0; i < 2000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.1, 10), e = gen.log_uniform(0.1, 10);
    const double a = gen.uniform(0, 3), d = gen.uniform(0.01, 3);
    const auto r = m_matrix_check(rho, e, a, d, eos);
    EXPECT_NEAR(r.det_M2, r.det_M2_direct, 1e-10 * (std::abs(r.m.a11 * r.m.a22) + r.m.a12 * r.m.a12));
    EXPECT_LE(max_eigenvalue(r.m), 1e-12 * scale_of(r.m));
    // J alone: semi-definite exactly when the lambda = 0 determinant is non-negative.
    const auto n = n_matrix(thermo_eval(rho, e, eos), a, d);
    const bool eigen_nsd = max_eigenvalue(n) <= 1e-12 * scale_of(n);
    if (std::abs(r.lambda0_lhs) > 1e-9 * scale_of(n) * scale_of(n)) {
      EXPECT_EQ(r.negative_semidefinite, eigen_nsd);
    }
  }
}

TEST(SMatrix, DeterminantClosedFormMatchesEntries) {
  Gen gen(8);
  for (int i = 0; i < 3000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.1, 10), e = gen.log_uniform(0.1, 10);
    const double a = gen.uniform(0, 5), d = gen.uniform(0.01, 5), alpha = gen.uniform(-1, 1);
    const auto r = s_matrix(rho, e, a, d, alpha, eos);
    const double scale = std::abs(r.s2.a11 * r.s2.a22) + r.s2.a12 * r.s2.a12;
    EXPECT_NEAR(r.det_S2, r.det_S2_closed, 1e-10 * scale);
  }
}

TEST(SMatrix, AlphaOneDeterminantIsMinusQuarterSquare) {
  Gen gen(9);
  for (int i = 0; i < 1000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.1, 10), e = gen.log_uniform(0.1, 10);
    const double a = gen.uniform(0, 5), d = gen.uniform(0.01, 5);
    const auto r = s_matrix(rho, e, a, d, 1.0, eos);
    const auto t = thermo_eval(rho, e, eos);
    const double x = 1 - a / d;
    const double expected = -0.25 * x * x * std::pow(rho, -4) * t.sd.s_e * t.sd.s_e * t.p_e * t.p_e;
    const double scale = std::abs(r.s2.a11 * r.s2.a22) + r.s2.a12 * r.s2.a12;
    EXPECT_NEAR(r.det_S2, expected, 1e-10 * scale);
  }
}

TEST(SMatrix, SemidefinitenessAgreesWithEigenOracle) {
  Gen gen(10);
  int checked = 0, definite = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.1, 10), e = gen.log_uniform(0.1, 10);
    const double a = gen.uniform(0, 3), d = gen.uniform(0.01, 3), alpha = gen.uniform(-2, 1);
    const auto r = s_matrix(rho, e, a, d, alpha, eos);
    const double lmax = max_eigenvalue(r.s2), tol = 1e-10 * scale_of(r.s2);
    if (std::abs(lmax) < tol) continue;  // too close to call
    ++checked;
    definite += r.negative_semidefinite;
    EXPECT_EQ(r.negative_semidefinite, lmax < 0) << "x=" << r.x << " alpha=" << alpha;
    const auto b = admissible_range(rho, e, alpha, eos);
    EXPECT_EQ(b.admits(r.x), lmax < 0);
  }
  EXPECT_GT(checked, 4000);
  EXPECT_GT(definite, 100);
  EXPECT_LT(definite, checked - 100);
}

TEST(SMatrix, EqualCoefficientsAreSemidefiniteAtAlphaOne) {
  Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    const auto eos = EosModel::ideal_gas(gen.gamma());
    const double rho = gen.log_uniform(0.1, 10), e = gen.log_uniform(0.1, 10), a = gen.log_uniform(0.01, 10);
    const auto r = s_matrix(rho, e, a, a, 1.0, eos);
    EXPECT_TRUE(r.negative_semidefinite);
    EXPECT_LE(max_eigenvalue(r.s2), 1e-12 * scale_of(r.s2));
    const auto other = s_matrix(rho, e, a, 1.5 * a, 1.0, eos);
    EXPECT_GT(max_eigenvalue(other.s2), 0.0);
  }
}

TEST(AdmissibleRange, IdealGasAlphaZero) {
  for (double rho : {0.2, 1.0, 7.0})
    for (double e : {0.3, 2.0}) {
      const auto b = admissible_range(rho, e, 0.0, EosModel::ideal_gas(1.4));
      EXPECT_NEAR(b.gamma_coef, 2.5, 1e-12);
      EXPECT_NEAR(b.lo, 5 * (1 - std::sqrt(1.4)), 1e-11);
      EXPECT_NEAR(b.hi, 5 * (1 + std::sqrt(1.4)), 1e-11);
    }
}

TEST(AdmissibleRange, ShrinksToZeroAsAlphaApproachesOne) {
  const auto eos = EosModel::ideal_gas(1.4);
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {0.0, 0.5, 0.9, 0.99, 0.9999}) {
    const auto b = admissible_range(1.0, 1.0, alpha, eos);
    EXPECT_LT(b.hi - b.lo, prev);
    prev = b.hi - b.lo;
    EXPECT_TRUE(b.admits(0.0));
  }
  const auto one = admissible_range(1.0, 1.0, 1.0, eos);
  EXPECT_EQ(one.lo, 0.0);
  EXPECT_EQ(one.hi, 0.0);
  EXPECT_FALSE(one.admits(0.0));
  EXPECT_TRUE(one.admits_semidefinite(0.0));
  EXPECT_FALSE(one.admits_semidefinite(1e-9));
  EXPECT_THROW(admissible_range(1.0, 1.0, 1.1, eos), DomainError);
}

TEST(AdmissibleRange, RatioPropertyAgainstClosedDeterminant) {
  Gen gen(12);
  for (int i = 0; i < 5000; ++i) {
    const double g = gen.gamma(), alpha = gen.uniform(-3, 1), x = gen.uniform(-20, 2);
    const auto eos = EosModel::ideal_gas(g);
    const auto b = admissible_range(1.0, 1.0, alpha, eos);
    const double det = s_matrix_det_closed_form(thermo_eval(1.0, 1.0, eos), x, alpha);
    if (std::abs(det) < 1e-12) continue;
    EXPECT_EQ(b.admits(x), det > 0) << "gamma=" << g << " alpha=" << alpha << " x=" << x;
  }
}

TEST(MassVelocity, SubtractsFluxOverDensity) {
  const auto um = mass_velocity<2>(Vec<2>{1.0, 2.0}, 2.0, Vec<2>{0.5, -1.0});
  EXPECT_DOUBLE_EQ(um[0], 0.75);
  EXPECT_DOUBLE_EQ(um[1], 2.5);
  EXPECT_THROW(mass_velocity<1>(Vec<1>{1.0}, 0.0, Vec<1>{0.0}), DomainError);
}
