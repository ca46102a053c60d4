#include <gtest/gtest.h>

#include <cmath>

#include "tailwave/tails.hpp"

using namespace tailwave;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

}  // namespace

TEST(Fit, ExactPowerLaw) {
  auto t = linspace(10.0, 200.0, 400);
  std::vector<double> y;
  for (double x : t) y.push_back(5.0 / (x * x * x));
  auto fit = fit_power_law(t, y, 1.0);
  EXPECT_TRUE(fit.ok());
  EXPECT_NEAR(fit.exponent, 3.0, 1e-6);
  EXPECT_NEAR(fit.coefficient, 5.0, 1e-6);
  EXPECT_LE(fit.eta, 1e-6);
  EXPECT_NEAR(fit.model(20.0), 5.0 / 8000.0, 1e-12);
}

TEST(Fit, NegativeAmplitude) {
  auto t = linspace(10.0, 100.0, 50);
  std::vector<double> y;
  for (double x : t) y.push_back(-0.3 * std::pow(x, -2.5));
  auto fit = fit_power_law(t, y, 1.0);
  EXPECT_NEAR(fit.exponent, 2.5, 1e-9);
  EXPECT_NEAR(fit.coefficient, -0.3, 1e-9);
}

TEST(Fit, CorrectedPowerLaw) {
  auto t = linspace(50.0, 500.0, 1000);
  std::vector<double> y;
  for (double x : t) y.push_back((1.0 + 1.0 / x) / (x * x));
  auto fit = fit_power_law(t, y, 1.0);
  EXPECT_GE(fit.exponent, 1.99);
  EXPECT_LE(fit.exponent, 2.01);
  EXPECT_LE(fit.eta, 0.02);
}

TEST(Fit, Flags) {
  auto t = linspace(10.0, 20.0, 20);
  std::vector<double> zero(20, 0.0), osc;
  for (double x : t) osc.push_back(std::sin(x));
  EXPECT_TRUE(fit_power_law(t, zero, 1.0).zero_signal);
  EXPECT_FALSE(fit_power_law(t, zero, 1.0).ok());
  EXPECT_TRUE(fit_power_law(t, osc, 1.0).sign_change);
}

TEST(Fit, HuygensHasNoTail) {
  auto g = NullGrid::make(0.1, 40.0);
  auto u = i0_apply(zero_profile(), compact_bump_profile(1.0, 1.0), g);
  auto fit = fit_power_law(u, 1.0, FitWindow{10.0, 30.0});
  EXPECT_TRUE(fit.zero_signal);
  EXPECT_FALSE(fit.ok());
}

TEST(Fit, SampleTimesOnLattice) {
  auto g = NullGrid::make(0.1, 40.0, 50.0);
  auto ts = sample_times(*g, 1.0, FitWindow{10.0, 30.0});
  ASSERT_FALSE(ts.empty());
  for (double t : ts) {
    EXPECT_NEAR((t + 1.0) / 0.1, std::round((t + 1.0) / 0.1), 1e-9);
    EXPECT_GE(t, 10.0 - 1e-9);
    EXPECT_LE(t, 30.0 + 1e-9);
  }
  EXPECT_THROW(sample_times(*g, 1.0, FitWindow{10.0, 49.5}), OutOfDomainError);
  auto w = default_window(*g, 1.0);
  EXPECT_NEAR(w.t_min, 0.25 * 40.0, 1e-9);
  EXPECT_NEAR(w.t_max, 0.75 * 40.0, 1e-9);
}

TEST(Fit, TimelikeStart) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(timelike_start(1.0, inf, 3.0, inf), 2.0);
  EXPECT_DOUBLE_EQ(timelike_start(2.0, 5.0, 3.0, 3.0), 12.0);
}

TEST(TailCoefficient, FirstOrderWithoutPotential) {
  auto g = NullGrid::make(0.1, 40.0);
  auto fit = tail_coefficient_first_order(zero_profile(), compact_bump_profile(1.0, 1.0), zero_profile(), g, 1.0,
                                          FitWindow{10.0, 30.0});
  EXPECT_TRUE(fit.zero_signal);
}

TEST(TailCoefficient, FirstOrderExponent) {
  auto g = NullGrid::make(0.1, 160.0, 160.0);
  FitWindow w{50.0, 150.0};
  auto fit = tail_coefficient_first_order(zero_profile(), compact_bump_profile(1.0, 1.0), powerlaw_potential(3.0), g,
                                          1.0, w);
  ASSERT_TRUE(fit.ok()) << fit.flag;
  EXPECT_NEAR(fit.exponent, 3.0, 0.2);
}

TEST(TailCoefficient, NonlinearExponent) {
  auto g = NullGrid::make(0.1, 160.0, 160.0);
  FitWindow w{50.0, 150.0};
  auto F = NonlinearitySpec::monomial(3);
  auto fit = tail_coefficient_order_p(zero_profile(), compact_bump_profile(1.0, 1.0), F, nullptr, 0.0, 0, g, 1.0, w);
  ASSERT_TRUE(fit.ok()) << fit.flag;
  EXPECT_NEAR(fit.exponent, 2.0, 0.2);
  auto V = powerlaw_potential(3.0);
  // small λ̃ keeps the t⁻³ potential part from flipping the sign inside the window
  auto both = tail_coefficient_order_p(zero_profile(), compact_bump_profile(1.0, 1.0), F, &V, 0.01, 2, g, 1.0, w);
  ASSERT_TRUE(both.ok()) << both.flag;
  EXPECT_NEAR(both.exponent, 2.0, 0.2);
  auto none = tail_coefficient_order_p(zero_profile(), zero_profile(), F, nullptr, 0.0, 0, g, 1.0, w);
  EXPECT_TRUE(none.zero_signal);
}

TEST(TailCoefficient, LinearInLambda) {
  auto g = NullGrid::make(0.1, 60.0, 60.0);
  auto V = powerlaw_potential(3.0);
  auto data = compact_bump_profile(1.0, 1.0);
  auto fit = tail_coefficient_first_order(zero_profile(), data, V, g, 1.0, FitWindow{20.0, 50.0});
  // first order of u for λ and 2λ
  for (double lam : {0.01, 0.02}) {
    SchemeOptions o;
    o.N = 1;
    auto run = picard_linear(zero_profile(), data, V, lam, g, o);
    auto first = axpy(run.element(1), -1.0, run.element(0));
    EXPECT_NEAR(first.at(40.0, 1.0) / lam, fit.coefficient * std::pow(40.0, -fit.exponent),
                fit.eta * std::abs(fit.coefficient) * std::pow(40.0, -fit.exponent) + 1e-15);
  }
}

TEST(Remainder, Formula) {
  RemainderParams p;
  p.cls = EquationClass::linear;
  p.C_pk = 7.0;
  p.data = 2.0;
  p.q = 3.0;
  p.lambda = 0.0;
  EXPECT_EQ(remainder_bound(p, 0, 5.0, 1.0), 0.0);
  p.lambda = 0.05;
  const double b1 = remainder_bound(p, 1, 5.0, 1.0), b2 = remainder_bound(p, 2, 5.0, 1.0);
  EXPECT_NEAR(b2 / b1, 0.35, 1e-14);
  const double w = 7.0 * 5.0 * 5.0;
  EXPECT_NEAR(b1, 0.35 * 0.35 / 0.65 * 5.0 * 2.0 / w, 1e-15);
  p.lambda = 0.06;
  EXPECT_GT(remainder_bound(p, 1, 5.0, 1.0), b1);
  p.lambda = 0.2;
  EXPECT_THROW(remainder_bound(p, 1, 5.0, 1.0), std::domain_error);

  RemainderParams n;
  n.cls = EquationClass::nonlinear;
  n.delta = 0.3;
  n.eps = 0.01;
  n.q = 2.0;
  const double a1 = remainder_bound(n, 1, 3.0, 1.0);
  EXPECT_NEAR(a1, 0.3 / 0.7 * 3 * 5.0 * 0.01 / (5.0 * 3.0), 1e-15);
  EXPECT_LT(remainder_bound(n, 2, 3.0, 1.0), a1);
  n.eps = 0.02;
  EXPECT_GT(remainder_bound(n, 1, 3.0, 1.0), a1);
  n.cls = EquationClass::full;
  EXPECT_NEAR(remainder_bound(n, 1, 3.0, 1.0), 0.51 / 0.49 * 3 * 5.0 * 0.02 / 15.0, 1e-15);
}

TEST(Remainder, LinearPointwise) {
  auto g = NullGrid::make(0.1, 40.0);
  auto data = compact_bump_profile(1.0, 1.0);
  auto V = powerlaw_potential(3.0);
  const double lam = 0.1;
  SchemeOptions o;
  o.N = 1;
  auto run = picard_linear(zero_profile(), data, V, lam, g, o);
  EvolutionParams ep;
  ep.lambda = lam;
  auto ref = iv_apply(zero_profile(), data, V, ep, g);
  RemainderParams p;
  p.lambda = lam;
  p.C_pk = c_pq(3.0, 3.0);
  p.q = 3.0;
  // data constant of the bump with weight 4: g₀ = sup ⟨r⟩⁴ g
  p.data = norm_space(data, 4.0, radial_mesh(1.0, 1e-4));
  auto chk = check_remainder(ref, run.element(1), p, 1);
  EXPECT_TRUE(chk.pass) << chk.worst_ratio;
  EXPECT_GT(chk.nodes, 1000u);
}

TEST(Certify, SkippedOutsideContraction) {
  SchemeRun run;
  run.params.delta = 1.4;
  DecayFit fit;
  fit.exponent = 3;
  fit.coefficient = 1;
  fit.eta = 0.01;
  auto g = NullGrid::make(0.1, 10.0);
  auto c = certify_asymptotics(run, SpacetimeField(g), fit, 0.2);
  EXPECT_TRUE(c.skipped);
  EXPECT_FALSE(c.certified);
  EXPECT_NE(c.note.find("hypothesis"), std::string::npos);
}

TEST(Certify, ExactTail) {
  auto g = NullGrid::make(0.1, 40.0, 45.0);
  auto u = SpacetimeField::from_physical(g, [](double t, double) { return t > 1 ? 2.0 * std::pow(t, -3.0) : 0.0; });
  auto fit = fit_power_law(u, 1.0, FitWindow{10.0, 30.0});
  fit.eta = 1e-3;  // nominal
  SchemeRun run;
  run.params.delta = 0.3;
  auto c = certify_asymptotics(run, u, fit, 1.0);
  EXPECT_TRUE(c.certified);
  EXPECT_LE(c.max_rel_error, 1e-10);
  auto off = certify_asymptotics(run, u, fit, 1.1);
  EXPECT_FALSE(off.certified);
}
