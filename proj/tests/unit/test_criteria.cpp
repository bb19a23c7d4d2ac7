#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <sstream>

#include "blowup/criteria.hpp"
#include "blowup/criteria_io.hpp"
#include "blowup/error.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace blowup;
using namespace blowup::criteria;
using testsupport::error_kind;

namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

// C_{g,n} and C evaluated in 50-digit decimal arithmetic.
Big big_c_gamma_n(const Big& g, int n) {
  const Big d = (n + 2) * g - n;
  const Big b = 2 * g / (n * (g - 1));
  return pow(b, n * (g - 1) / d) + pow(b, -2 * g / d);
}

Big big_c(const Big& g, int n, const Big& m, const Big& S0) {
  const Big d = (n + 2) * g - n;
  return exp(S0) / (g - 1) * pow(m / big_c_gamma_n(g, n), d / 2);
}

double significant_digits(double value, const Big& exact) {
  const Big err = abs(Big(value) - exact) / abs(exact);
  if (err == 0) return 50.0;
  return -log10(err).convert_to<double>();
}

GasModel model(int n, double gamma) {
  GasModel m;
  m.dim = n;
  m.gamma = gamma;
  return m;
}

FluidState gaussian2(const VectorField& v, double kappa, double gamma, int cells = 128) {
  const auto rho = [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); };
  return sample_state(Grid::cube(2, cells, 6.0), 0.0, rho, v,
                      [=](const Point& x) { return kappa * std::pow(rho(x), gamma); });
}

MomentSet moments_of(const FluidState& s, double gamma) { return compute_moments(s, model(s.dim(), gamma)); }

}  // namespace

TEST(CheminConstant, ClosedFormValues) {
  EXPECT_NEAR(chemin_constant(2.0, 2, 1.0, 0.0).C_gamma_n, std::cbrt(2.0) + std::pow(2.0, -2.0 / 3.0), 1e-15);
  EXPECT_NEAR(chemin_constant(2.0, 2, 1.0, 0.0).C_gamma_n, 1.88988, 5e-6);
  EXPECT_NEAR(chemin_constant(2.0, 1, 1.0, 0.0).C_gamma_n, std::pow(4.0, 0.2) + std::pow(4.0, -0.8), 1e-15);
  EXPECT_NEAR(chemin_constant(2.0, 1, 1.0, 0.0).C_gamma_n, 1.64938, 5e-6);
}

TEST(CheminConstant, AgreesWithFiftyDigitEvaluation) {
  testsupport::Rng rng(3);
  for (double g : {1.4, 5.0 / 3.0, 2.0}) {
    for (int n : {1, 2, 3}) {
      const double m = rng.uniform(0.1, 10.0), S0 = rng.uniform(-3.0, 3.0);
      const CheminConstant cc = chemin_constant(g, n, m, S0);
      const Big bg = g == 5.0 / 3.0 ? Big(5) / 3 : Big(g);
      EXPECT_GT(significant_digits(cc.C_gamma_n, big_c_gamma_n(bg, n)), 12.0) << g << ' ' << n;
      EXPECT_GT(significant_digits(cc.C, big_c(bg, n, Big(m), Big(S0))), 12.0) << g << ' ' << n;
      EXPECT_GT(cc.C, 0.0);
      EXPECT_FALSE(cc.degenerate);
    }
  }
}

TEST(CheminConstant, ZeroMassAndBadGamma) {
  const CheminConstant cc = chemin_constant(1.4, 2, 0.0, 0.0);
  EXPECT_EQ(cc.C, 0.0);
  EXPECT_TRUE(cc.degenerate);
  EXPECT_GT(cc.C_gamma_n, 0.0);
  EXPECT_EQ(error_kind([] { chemin_constant(1.0, 2, 1.0, 0.0); }), ErrorKind::DomainError);
  EXPECT_EQ(error_kind([] { chemin_constant(0.5, 2, 1.0, 0.0); }), ErrorKind::DomainError);
}

TEST(CheminConstant, FromStateUsesMinimumEntropy) {
  const FluidState s = gaussian2([](const Point&) { return Point{}; }, 0.5, 1.4);
  const MomentSet ms = moments_of(s, 1.4);
  const CheminConstant cc = chemin_constant(s, ms, 1.4);
  EXPECT_NEAR(cc.S0, std::log(0.5), 1e-12);
  EXPECT_EQ(cc.m, ms.m);
  const FluidState cold = gaussian2([](const Point&) { return Point{}; }, 0.0, 1.4);
  EXPECT_EQ(chemin_constant(cold, moments_of(cold, 1.4), 1.4).C, 0.0);
}

TEST(BlowupCriterion, PressurelessExpansionSitsOnTheBoundary) {
  const FluidState s = gaussian2([](const Point& x) { return Point{x[0], x[1], 0.0}; }, 0.0, 2.0, 256);
  const MomentSet ms = moments_of(s, 2.0);
  const CriterionReport r = theorem21_check(ms, chemin_constant(s, ms, 2.0), 2.0, 2);
  EXPECT_NEAR(r.rhs, M_PI, 1e-10);
  EXPECT_NEAR(r.lhs, M_PI, 1e-10);
  // F = 2 sqrt(E G) in exact arithmetic; allow the last bits either way.
  EXPECT_NEAR(r.margin, 0.0, 1e-13);
  EXPECT_EQ(r.satisfied, r.margin >= 0.0);
  EXPECT_FALSE(r.notes.empty());

  // The same data with exact moments meets the threshold with equality.
  MomentSet exact = ms;
  exact.F = 2.0;
  exact.G = 1.0;
  exact.E = 1.0;
  exact.Ek = 1.0;
  const CriterionReport re = theorem21_check(exact, chemin_constant(2.0, 2, 0.0, 0.0), 2.0, 2);
  EXPECT_EQ(re.rhs, 2.0);
  EXPECT_TRUE(re.satisfied);
}

TEST(BlowupCriterion, PureRotationIsNotSatisfied) {
  const FluidState s = gaussian2([](const Point& x) { return Point{x[1], -x[0], 0.0}; }, 0.0, 2.0);
  const MomentSet ms = moments_of(s, 2.0);
  const CriterionReport r = theorem21_check(ms, chemin_constant(s, ms, 2.0), 2.0, 2);
  EXPECT_FALSE(r.satisfied);
  EXPECT_GT(r.rhs, 0.0);
  EXPECT_FALSE(r.t_star.has_value());
}

TEST(BlowupCriterion, OneDimensionalGaussiansNeverQualify) {
  for (double a0 : {1.0, 10.0, 100.0}) {
    const FluidState s = sample_state(
        Grid::cube(1, 512, 8.0), 0.0, [](const Point& x) { return std::exp(-x[0] * x[0]); },
        [=](const Point& x) { return Point{a0 * x[0], 0.0, 0.0}; },
        [](const Point& x) { return std::exp(-2.0 * x[0] * x[0]); });
    const MomentSet ms = moments_of(s, 2.0);
    ASSERT_GT(ms.Ep, 0.0);
    const CriterionReport r = theorem21_check(ms, chemin_constant(s, ms, 2.0), 2.0, 1);
    EXPECT_FALSE(r.satisfied) << a0;
  }
}

namespace {

// First scale in 1, 1.5, 1.5^2, ... below 1e4 at which a satisfied verdict is
// lost, or 0 when none is.
double first_revocation(const MomentSet& ms, const CheminConstant& cc, double gamma, int n) {
  bool was = false;
  for (double s = 1.0; s < 1e4; s *= 1.5) {
    MomentSet scaled = ms;
    scaled.F = s * ms.F;
    scaled.Ek = s * s * ms.Ek;
    scaled.E = scaled.Ek + ms.Ep;
    const bool now = theorem21_check(scaled, cc, gamma, n).satisfied;
    if (was && !now) return s;
    was = now;
  }
  return 0.0;
}

}  // namespace

TEST(BlowupCriterion, ScalingRadialVelocityNeverRevokesAVerdict) {
  // V proportional to x (F^2 = 4 G Ek) in the gamma <= 1 + 2/n branch.
  testsupport::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.integer(1, 3);
    const double gamma = rng.uniform(1.05, 1.0 + 2.0 / n);
    MomentSet ms = testsupport::random_moments(rng, n, gamma);
    std::fill(ms.M.begin(), ms.M.end(), 0.0);
    ms.F = 2.0 * std::sqrt(ms.G * ms.Ek);
    const CheminConstant cc = chemin_constant(gamma, n, ms.m, rng.uniform(-2, 2));
    EXPECT_EQ(first_revocation(ms, cc, gamma, n), 0.0) << "trial " << trial;
  }
}

TEST(BlowupCriterion, ScalingCanRevokeAVerdictOutsideTheRadialCase) {
  // rhs tends to k 2 sqrt(E G) while F / (2 sqrt(E G)) tends to F / (2 sqrt(G Ek)),
  // so large scales fail whenever k > 1 or the velocity is not radial.
  MomentSet high;
  high.dim = 3;
  high.G = 0.746116;
  high.Ek = 9.93006;
  high.Ep = 0.442019;
  high.E = high.Ek + high.Ep;
  high.F = 2.0 * std::sqrt(high.G * high.Ek);
  high.M = {0.0, 0.0, 0.0};
  const double g = 1.69683;
  CheminConstant cc = chemin_constant(g, 3, 1.0, 0.0);
  cc.C = 4.3716;
  ASSERT_FALSE(threshold_constants(high, cc, g, 3).low_gamma);
  EXPECT_TRUE(theorem21_check(high, cc, g, 3).satisfied);
  EXPECT_GT(first_revocation(high, cc, g, 3), 0.0);

  MomentSet low = high;
  low.dim = 2;
  low.M = {0.0};
  low.F = 0.999 * 2.0 * std::sqrt(low.G * low.Ek);
  low.Ep = 1e-3;
  low.E = low.Ek + low.Ep;
  const CheminConstant c2 = chemin_constant(1.4, 2, 1.0, 0.0);
  EXPECT_TRUE(theorem21_check(low, c2, 1.4, 2).satisfied);
  EXPECT_GT(first_revocation(low, c2, 1.4, 2), 0.0);
}

TEST(BlowupCriterion, HighGammaBranchUsesReducedL1) {
  MomentSet ms;
  ms.dim = 2;
  ms.G = 1.0;
  ms.E = 2.0;
  ms.Ek = 1.0;
  ms.Ep = 1.0;
  ms.M = {0.0};
  const auto low = threshold_constants(ms, chemin_constant(2.0, 2, 1.0, 0.0), 2.0, 2);
  EXPECT_TRUE(low.low_gamma);
  EXPECT_EQ(low.L1, low.L2);
  const auto high = threshold_constants(ms, chemin_constant(3.0, 2, 1.0, 0.0), 3.0, 2);
  EXPECT_FALSE(high.low_gamma);
  EXPECT_DOUBLE_EQ(high.k, 3.0);
  EXPECT_DOUBLE_EQ(high.L1, high.L / 3.0);
}

TEST(BlowupCriterion, LifetimeBoundWhenSatisfied) {
  MomentSet ms;
  ms.dim = 2;
  ms.G = 1.0;
  ms.Ek = 50.0;
  ms.Ep = 1e-3;
  ms.E = ms.Ek + ms.Ep;
  ms.F = 2.0 * std::sqrt(ms.G * ms.Ek);
  ms.M = {0.0};
  const CheminConstant cc = chemin_constant(1.4, 2, 1.0, -3.0);
  const CriterionReport r = theorem21_check(ms, cc, 1.4, 2);
  ASSERT_TRUE(r.satisfied);
  ASSERT_TRUE(r.t_star.has_value());
  const auto tc = threshold_constants(ms, cc, 1.4, 2);
  const double seg = 2.0 * std::sqrt(ms.E * ms.G);
  const double q = seg / tc.L2 * (M_PI / 2 - std::atan(ms.F / tc.L1));
  EXPECT_NEAR(*r.t_star, std::sqrt(ms.G / ms.E) * q / (1 - q), 1e-9 * *r.t_star);
  EXPECT_EQ(error_kind([&] {
              MomentSet z = ms;
              z.E = 0.0;
              theorem21_check(z, cc, 1.4, 2);
            }),
            ErrorKind::DegenerateData);
}

TEST(Diagnostics, AngularMomentumFreeDataCannotReachTheCondition) {
  const double gamma = 1.4;
  const FluidState s = gaussian2([](const Point& x) { return Point{x[0], x[1], 0.0}; }, 1.0, gamma);
  const MomentSet ms = moments_of(s, gamma);
  const DiagnosticsReport d = necessary_diagnostics(ms, chemin_constant(s, ms, gamma), gamma, 2);
  EXPECT_GE(d.z1, 1.0);
  EXPECT_NEAR(d.f_zero, M_PI / 2 - 1 / d.z1, 1e-15);
  EXPECT_GT(d.f_zero, 0.0);
  EXPECT_TRUE(d.unreachable);
}

TEST(Diagnostics, PrintedConstantCanPushZ1BelowOne) {
  // With gamma = 2 the closed-form C overshoots Ep G^{(gamma-1)n/2}, so z1 < 1
  // and f dips below zero at large z.
  const FluidState s = gaussian2([](const Point& x) { return Point{x[0], x[1], 0.0}; }, 1.0, 2.0);
  const MomentSet ms = moments_of(s, 2.0);
  const CheminConstant cc = chemin_constant(s, ms, 2.0);
  EXPECT_GT(cc.C, ms.Ep * ms.G);
  const DiagnosticsReport d = necessary_diagnostics(ms, cc, 2.0, 2);
  EXPECT_LT(d.z1, 1.0);
  EXPECT_LT(d.f_min, 0.0);
  EXPECT_FALSE(d.unreachable);
}

TEST(Diagnostics, PressurelessIsSkipped) {
  const FluidState s = gaussian2([](const Point& x) { return Point{x[0], x[1], 0.0}; }, 0.0, 2.0);
  const MomentSet ms = moments_of(s, 2.0);
  const DiagnosticsReport d = necessary_diagnostics(ms, chemin_constant(s, ms, 2.0), 2.0, 2);
  EXPECT_TRUE(d.skipped);
  EXPECT_FALSE(d.note.empty());
}

TEST(Diagnostics, EqualKineticAndPotentialEnergyFailsTheKineticFlag) {
  MomentSet ms;
  ms.dim = 2;
  ms.G = 1.0;
  ms.Ek = 1.0;
  ms.Ep = 1.0;
  ms.E = 2.0;
  ms.F = 1.0;
  ms.M = {0.0};
  const DiagnosticsReport d = necessary_diagnostics(ms, chemin_constant(2.0, 2, 1.0, 0.0), 2.0, 2);
  EXPECT_DOUBLE_EQ(d.ek_over_ep, 1.0);
  EXPECT_FALSE(d.kinetic_dominance);
  EXPECT_FALSE(d.kinetic_share);
  EXPECT_NEAR(d.divergence_threshold, 2.0 * std::sqrt(2.0) / std::tan(1.0), 1e-14);
}

TEST(Sideris, HyperbolicCaseThresholdIsFourA) {
  const SiderisSetup s = SiderisSetup::make(3, 1.0, 1.5, 1.0, 2.0, 0.1, 0.0, 1.0);
  EXPECT_NEAR(s.A, 2.0 * (4.0 / 3.0) * M_PI * std::pow(1.5, 5), 1e-10);
  const auto reps = sideris_check(s, 3);
  ASSERT_EQ(reps.size(), 5u);
  EXPECT_EQ(reps[2].tag, Tag::T3_1c);
  EXPECT_DOUBLE_EQ(reps[2].rhs, 4.0 * s.A);
  EXPECT_FALSE(reps[2].satisfied);
}

TEST(Sideris, SlowGrowthWithAngularMomentumAlwaysQualifies) {
  for (double F0 : {-5.0, 0.0, 5.0}) {
    const auto reps = sideris_check(SiderisSetup::make(2, 0.25, 1.0, 1.0, 1.0, 0.0, 0.3, F0), 2);
    EXPECT_TRUE(reps[1].satisfied) << F0;
    EXPECT_FALSE(reps[2].satisfied);
  }
  const auto a = sideris_check(SiderisSetup::make(2, 0.25, 1.0, 1.0, 1.0, 0.0, 0.0, 0.1), 2);
  EXPECT_TRUE(a[0].satisfied);
  const auto a0 = sideris_check(SiderisSetup::make(2, 0.25, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0), 2);
  EXPECT_FALSE(a0[0].satisfied);
}

TEST(Sideris, ConditionEHoldsWithEquality) {
  SiderisSetup s;
  s.alpha = 1.0;
  s.A = 1.0;
  s.M_norm = 4.0 * M_PI;
  s.F0 = 0.0;
  const auto reps = sideris_check(s, 3);
  EXPECT_TRUE(reps[4].satisfied);
  EXPECT_EQ(reps[4].margin, 0.0);
}

TEST(Sideris, ConditionDTendsToConditionC) {
  SiderisSetup s;
  s.alpha = 1.0;
  s.A = 0.7;
  s.M_norm = 1e-4;
  const auto reps = sideris_check(s, 2);
  EXPECT_NEAR(reps[3].rhs, reps[2].rhs, 1e-6);
  EXPECT_EQ(error_kind([&] {
              SiderisSetup bad = s;
              bad.eta0 = -1.0;
              sideris_check(bad, 2);
            }),
            ErrorKind::EtaNegative);
}

TEST(Sideris, PerturbationEtaVanishesOnTheBackground) {
  const FluidState s = sample_state(
      Grid::cube(2, 16, 2.0), 0.0, [](const Point&) { return 1.3; }, [](const Point&) { return Point{}; },
      [](const Point&) { return std::exp(0.2) * std::pow(1.3, 1.4); });
  EXPECT_NEAR(perturbation_eta(s, 1.4, 1.3, 0.2), 0.0, 1e-12);
  EXPECT_NEAR(unit_ball_volume(2), M_PI, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * M_PI / 3.0, 1e-15);
}

TEST(Damped, NoFrictionMeansNoDamping) {
  testsupport::Rng rng(5);
  const MomentSet ms = testsupport::random_moments(rng, 2, 1.4);
  EXPECT_EQ(damping_psi(ms, 1.3, 2, 0.0, 10.0), 1.0);
  const CriterionReport r = damped_check(ms, chemin_constant(1.4, 2, ms.m, 0.0), 1.4, 2, 0.0, 0.9);
  bool found = false;
  for (const auto& in : r.inputs) {
    if (in.name == "T_mu0") {
      found = true;
      EXPECT_TRUE(std::isinf(in.value));
    }
  }
  EXPECT_TRUE(found);
}

TEST(Damped, SmallerPsiStarShrinksTheSatisfiedSet) {
  testsupport::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(1, 3);
    const double gamma = rng.uniform(1.1, 2.5);
    MomentSet ms = testsupport::random_moments(rng, n, gamma);
    ms.F = std::abs(ms.F) * rng.uniform(1.0, 20.0);
    const CheminConstant cc = chemin_constant(gamma, n, ms.m, rng.uniform(-4, 1));
    bool prev = false;
    for (double psi : {0.2, 0.4, 0.6, 0.8, 0.95, 0.999}) {
      const bool now = damped_check(ms, cc, gamma, n, 0.0, psi).satisfied;
      EXPECT_FALSE(prev && !now) << "trial " << trial << " psi " << psi;
      prev = now;
    }
  }
}

TEST(Damped, FrictionSweepFlipsOnceAndStaysOff) {
  MomentSet ms;
  ms.dim = 2;
  ms.G = 1.0;
  ms.Ek = 20.0;
  ms.Ep = 1e-4;
  ms.E = ms.Ek + ms.Ep;
  ms.F = 2.0 * std::sqrt(ms.G * ms.Ek);
  ms.M = {0.0};
  const CheminConstant cc = chemin_constant(1.4, 2, 1.0, -2.0);
  ASSERT_TRUE(theorem21_check(ms, cc, 1.4, 2).satisfied);
  ASSERT_TRUE(damped_check(ms, cc, 1.4, 2, 0.0, 0.9).satisfied);
  bool flipped = false;
  for (double mu = 1e-4; mu < 1e3; mu *= 1.25) {
    const bool sat = damped_check(ms, cc, 1.4, 2, mu, 0.9).satisfied;
    if (!sat) flipped = true;
    EXPECT_FALSE(flipped && sat) << "satisfied again at mu0 = " << mu;
  }
  EXPECT_TRUE(flipped);
}

TEST(Damped, PsiStarNearOneRecoversTheForceFreeThreshold) {
  testsupport::Rng rng(23);
  const MomentSet ms = testsupport::random_moments(rng, 2, 1.4);
  const CheminConstant cc = chemin_constant(1.4, 2, ms.m, 0.0);
  const auto tc = threshold_constants(ms, cc, 1.4, 2);
  const double rhs = tc.L * guarded_cot(tc.L / (2.0 * std::sqrt(ms.E * ms.G)));
  EXPECT_NEAR(damped_check(ms, cc, 1.4, 2, 0.0, 1.0 - 1e-12).rhs, rhs, 1e-9 * std::abs(rhs));
  EXPECT_EQ(error_kind([&] { damped_check(ms, cc, 1.4, 2, 0.0, 1.0); }), ErrorKind::PsiStarOutOfRange);
  EXPECT_EQ(error_kind([&] { damped_check(ms, cc, 1.4, 2, 0.0, 0.0); }), ErrorKind::PsiStarOutOfRange);
}

TEST(Rotation, PressurelessDataNeverSatisfiesPositiveKCondition) {
  testsupport::Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    MomentSet ms = testsupport::random_moments(rng, 2, 2.0);
    ms.Ep = 0.0;
    ms.E = ms.Ek;
    const double l = rng.uniform(-3, 3);
    if (l == 0.0) continue;
    const RotationResult r = rotation_check(ms, chemin_constant(2.0, 2, 0.0, 0.0), 2.0, l);
    EXPECT_EQ(r.bounds.delta, 0.0);
    EXPECT_FALSE(r.cond53.satisfied) << "trial " << trial;
    EXPECT_LE(r.bounds.K_script, 0.0);
  }
}

TEST(Rotation, RestStateCannotMeetNonPositiveKCondition) {
  const FluidState s = gaussian2([](const Point&) { return Point{}; }, 0.5, 2.0);
  const MomentSet ms = moments_of(s, 2.0);
  const RotationResult r = rotation_check(ms, chemin_constant(s, ms, 2.0), 2.0, 1.0);
  ASSERT_LT(r.bounds.K_script, 0.0);
  EXPECT_FALSE(r.cond54.satisfied);
}

TEST(Rotation, WeakRotationDrivesKToMinusInfinity) {
  const FluidState s = gaussian2([](const Point& x) { return Point{0.3 * x[0], 0.3 * x[1], 0.0}; }, 0.5, 2.0);
  const MomentSet ms = moments_of(s, 2.0);
  const CheminConstant cc = chemin_constant(s, ms, 2.0);
  double prevK = 0.0, prevG = 0.0;
  for (double l : {1e-1, 1e-2, 1e-3}) {
    const RotationResult r = rotation_check(ms, cc, 2.0, l);
    EXPECT_FALSE(r.cond53.satisfied);
    EXPECT_FALSE(r.cond54.satisfied);
    if (prevG > 0.0) {
      EXPECT_LT(r.bounds.K_script, prevK);
      EXPECT_NEAR(r.bounds.G_plus / prevG, 100.0, 1.0);
    }
    prevK = r.bounds.K_script;
    prevG = r.bounds.G_plus;
  }
}

TEST(Rotation, UpperBoundHoldsOnActualFields) {
  testsupport::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const FluidState s = testsupport::random_mixture_state(rng, 64, 8.0, 2.0);
    const MomentSet ms = moments_of(s, 2.0);
    const RotationResult r = rotation_check(ms, chemin_constant(s, ms, 2.0), 2.0, rng.uniform(0.2, 2.0));
    EXPECT_LE(ms.G, r.bounds.G_plus) << "trial " << trial;
  }
}

TEST(Rotation, LifetimeBoundsFromTheComparisonEquation) {
  MomentSet ms;
  ms.dim = 2;
  ms.G = 1.0;
  ms.Ek = 3.0;
  ms.Ep = 0.0;
  ms.E = 3.0;
  ms.F = 3.0;
  ms.F_perp = -1.0;
  ms.M = {1.0};
  const RotationResult r = rotation_check(ms, chemin_constant(2.0, 2, 0.0, 0.0), 2.0, 1.0);
  const double K = r.bounds.K_script;
  ASSERT_LT(K, 0.0);
  const double k = std::sqrt(-K);
  if (ms.F > k) {
    ASSERT_TRUE(r.cond54.t_star.has_value());
    EXPECT_NEAR(*r.cond54.t_star, r.bounds.G_plus / k * std::log((ms.F + k) / (ms.F - k)), 1e-12);
  } else {
    EXPECT_FALSE(r.cond54.satisfied);
  }
  MomentSet cold = ms;
  cold.E = cold.Ek = 0.1;
  EXPECT_EQ(error_kind([&] { rotation_check(cold, chemin_constant(2.0, 2, 0.0, 0.0), 2.0, 0.5); }),
            ErrorKind::ThetaNegative);
}

TEST(PointwiseRotation, RestIsGloballySmooth) {
  const Grid g = Grid::cube(2, 16, 1.0);
  std::vector<std::vector<double>> v(2, std::vector<double>(g.size(), 0.0));
  const auto p = pressureless_rotation_pointwise(g, v, 0.8);
  EXPECT_TRUE(p.globally_smooth);
  EXPECT_FALSE(p.report.satisfied);
  EXPECT_EQ(p.max_lhs, 0.0);
}

TEST(PointwiseRotation, RigidRotationFailsOnlyAtMinusHalfL) {
  testsupport::Rng rng(37);
  const Grid g = Grid::cube(2, 16, 1.0);
  const double l = 1.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double c = rng.uniform(-2, 2);
    std::vector<std::vector<double>> v(2, std::vector<double>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point x = g.center(i);
      v[0][i] = c * x[1];
      v[1][i] = -c * x[0];
    }
    // omega0 = -2c and eta0^2 = -4c^2 by hand.
    const auto p = pressureless_rotation_pointwise(g, v, l);
    EXPECT_NEAR(p.max_lhs, 2 * l * (-2 * c) - 4 * c * c, 1e-12);
    EXPECT_TRUE(p.globally_smooth);
  }
  std::vector<std::vector<double>> v(2, std::vector<double>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.center(i);
    v[0][i] = -0.5 * x[1];
    v[1][i] = 0.5 * x[0];
  }
  EXPECT_NEAR(pressureless_rotation_pointwise(g, v, l).max_lhs, l * l, 1e-12);
}

TEST(PointwiseRotation, ExpansionHasNoRotationalPart) {
  const Grid g = Grid::cube(2, 16, 1.0);
  std::vector<std::vector<double>> v(2, std::vector<double>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[0][i] = g.center(i)[0];
    v[1][i] = g.center(i)[1];
  }
  const auto p = pressureless_rotation_pointwise(g, v, 0.5);
  EXPECT_NEAR(p.max_lhs, 0.0, 1e-12);
  EXPECT_TRUE(p.globally_smooth);
}

TEST(PointwiseRotation, ShearViolates) {
  const Grid g = Grid::cube(2, 16, 1.0);
  std::vector<std::vector<double>> v(2, std::vector<double>(g.size(), 0.0));
  for (std::size_t i = 0; i < g.size(); ++i) v[0][i] = 3.0 * g.center(i)[0];
  const auto p = pressureless_rotation_pointwise(g, v, 1.0);
  EXPECT_FALSE(p.globally_smooth);
  EXPECT_TRUE(p.report.satisfied);
  EXPECT_EQ(p.holds[0], 0);
}

TEST(GuardedCot, StaysFinite) {
  for (double x : {0.0, 1e-300, M_PI, 4.0, -1.0}) EXPECT_TRUE(std::isfinite(guarded_cot(x))) << x;
  EXPECT_NEAR(guarded_cot(1.0), 1.0 / std::tan(1.0), 1e-15);
}

TEST(ReportIo, TextAndCsvEchoInputs) {
  CriterionReport r;
  r.tag = Tag::T4_1;
  r.satisfied = true;
  r.lhs = 2.0;
  r.rhs = 1.5;
  r.margin = 0.5;
  r.t_star = 0.25;
  r.inputs = {{"E", 1.0}, {"mu0", 0.1}};
  r.notes = "has \"quotes\"";
  std::ostringstream text;
  write_report(text, r);
  EXPECT_NE(text.str().find("[T4.1]\nsatisfied = true\n"), std::string::npos);
  EXPECT_NE(text.str().find("input.mu0 = 0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.str().find("t_star = 0.25"), std::string::npos);
  EXPECT_EQ(criteria_csv_header({"alpha0"}), "alpha0,tag,satisfied,lhs,rhs,margin,t_star,inputs,notes");
  EXPECT_EQ(criteria_csv_row(r, {3.0}),
            "3,T4.1,1,2,1.5,0.5,0.25,\"E=1;mu0=0.10000000000000001\",\"has \"\"quotes\"\"\"");
  r.t_star.reset();
  std::ostringstream none;
  write_report(none, r);
  EXPECT_NE(none.str().find("t_star = none"), std::string::npos);
}
