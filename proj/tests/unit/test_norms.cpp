#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tailwave/norms.hpp"

using namespace tailwave;

TEST(NormSpace, Basics) {
  auto mesh = radial_mesh(50.0, 0.001);
  EXPECT_EQ(norm_space(zero_profile(), 3.0, mesh), 0.0);
  EXPECT_NEAR(norm_space(powerlaw_profile(1.0, 2.0), 2.0, mesh), 1.0, 1e-12);
}

TEST(NormSpace, ExponentialCalculusOracle) {
  // d/dr (1+r)^3 e^{-r} = 0 at r = 2, so the sup is 27 e^{-2}
  RadialProfile f;
  f.name = "exp";
  f.value = [](double r) { return std::exp(-r); };
  auto mesh = radial_mesh(40.0, 0.001);
  EXPECT_NEAR(norm_space(f, 3.0, mesh), 27.0 * std::exp(-2.0), 1e-9);
}

TEST(NormSpacetime, ExactCancellation) {
  auto g = NullGrid::make(0.1, 20.0);
  EXPECT_EQ(norm_spacetime(SpacetimeField(g), 1.0, 3.0), 0.0);
  for (double p : {2.0, 3.0, 4.5}) {
    auto u = SpacetimeField::from_physical(g, [p](double t, double r) {
      return 1.0 / (bracket(t + r) * std::pow(bracket(t - r), p - 1.0));
    });
    EXPECT_NEAR(norm_spacetime(u, 1.0, p), 1.0, 1e-12) << p;
  }
}

TEST(NormSpacetime, Monotone) {
  // ⟨t−r⟩ >= 1 so the (1,2) norm never exceeds the (1,3) norm
  auto g = NullGrid::make(0.1, 10.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = U(rng), b = U(rng), c = 2.0 + U(rng);
    auto u = SpacetimeField::from_physical(g, [&](double t, double r) { return a * std::sin(b * t + r) / (c + t * t); });
    EXPECT_LE(norm_spacetime(u, 1.0, 2.0), norm_spacetime(u, 1.0, 3.0));
  }
}

TEST(NormSpacetime, Restriction) {
  auto g = NullGrid::make(0.1, 10.0);
  auto u = SpacetimeField::from_physical(g, [](double t, double) { return t; });
  const double all = norm_spacetime(u, 0.0, 0.0);
  const double early = norm_spacetime_where(u, 0.0, 0.0, [](double t, double) { return t <= 5.0; });
  EXPECT_NEAR(all, 10.0, 1e-12);
  EXPECT_NEAR(early, 5.0, 1e-12);
}

TEST(Constants, Cm) {
  EXPECT_DOUBLE_EQ(c_m(4.0), 5.0);
  EXPECT_NEAR(c_m(2.2), 22.5, 1e-12);
  EXPECT_DOUBLE_EQ(c_m(6.5), 5.0);
}

TEST(Constants, Cpq) {
  EXPECT_DOUBLE_EQ(c_pq(3, 3), 7.0);
  EXPECT_DOUBLE_EQ(c_pq(2, 3), 11.0);
  EXPECT_DOUBLE_EQ(c_pq(5, 2), 6.0);
}

TEST(Prediction, Exponents) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(predicted_exponent(5, 3, 3, EquationClass::full).value, 2.0);
  EXPECT_DOUBLE_EQ(predicted_exponent(inf, 3, inf, EquationClass::linear).value, 3.0);
  EXPECT_DOUBLE_EQ(predicted_exponent(inf, inf, 3, EquationClass::nonlinear).value, 2.0);
  EXPECT_TRUE(predicted_exponent(inf, 3, inf, EquationClass::linear).in_hypothesis());
}
