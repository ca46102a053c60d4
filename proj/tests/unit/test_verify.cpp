#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "tailwave/verify.hpp"

using namespace tailwave;

TEST(Report, PassRule) {
  auto r = make_report("x", "{}", 1.0, 1.02);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.margin, 1.02, 1e-15);
  EXPECT_TRUE(make_report("x", "{}", 1.04, 1.0).pass);  // inside the 5% slack
  EXPECT_FALSE(make_report("x", "{}", 1.1, 1.0).pass);
  EXPECT_FALSE(make_report("x", "{}", 1.01, 1.0, 0.0).pass);
  EXPECT_TRUE(std::isinf(make_report("x", "{}", 0.0, 0.0).margin));
}

TEST(DataNorms, Values) {
  auto n = data_norms(powerlaw_profile(1.0, 3.0), zero_profile(), 4.0, 50.0, 1e-3);
  EXPECT_NEAR(n.f0, 1.0, 1e-12);     // ⟨r⟩³·⟨r⟩⁻³
  EXPECT_NEAR(n.f1, 3.0, 1e-9);      // ⟨r⟩⁴·3⟨r⟩⁻⁴
  EXPECT_EQ(n.g0, 0.0);
  EXPECT_NEAR(n.eps(), 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(effective_m(std::numeric_limits<double>::infinity(), 2.0), 4.0);
  EXPECT_DOUBLE_EQ(effective_m(std::numeric_limits<double>::infinity(), 3.5), 4.5);
  EXPECT_DOUBLE_EQ(effective_m(5.0, 2.0), 5.0);
}

TEST(LemmaInitData, Cases) {
  auto g = NullGrid::make(0.1, 30.0);
  auto z = verify_lemma_init_data(zero_profile(), zero_profile(), 4.0, g);
  EXPECT_TRUE(z.pass);
  EXPECT_EQ(z.lhs, 0.0);
  auto p = verify_lemma_init_data(powerlaw_profile(1.0, 3.0), zero_profile(), 4.0, g);
  EXPECT_TRUE(p.pass);
  EXPECT_GT(p.margin, 1.0);
  EXPECT_THROW(verify_lemma_init_data(zero_profile(), zero_profile(), 3.0, g), std::domain_error);
}

TEST(LemmaInitData, ShippedSweep) {
  auto g = NullGrid::make(0.1, 30.0);
  auto sweep = default_init_data_sweep();
  EXPECT_EQ(sweep.size(), 10u);
  for (const auto& c : sweep) {
    auto r = verify_lemma_init_data(c.f, c.g, c.m, g);
    EXPECT_TRUE(r.pass) << c.name;
    EXPECT_GE(r.margin, 1.0) << c.name;
  }
}

TEST(LemmaSource, Cases) {
  auto g = NullGrid::make(0.1, 30.0);
  EXPECT_TRUE(verify_lemma_source(SpacetimeField(g), 3.0, 3.0).pass);
  auto r = verify_lemma_source(extremal_source(g, 3.0, 3.0), 3.0, 3.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.rhs, 7.0, 1e-12);  // F₀ = 1 for the extremal source
  EXPECT_THROW(verify_lemma_source(SpacetimeField(g), 2.0, 1.5), std::domain_error);
  EXPECT_THROW(verify_lemma_source(SpacetimeField(g), 3.0, 4.0), std::domain_error);
}

TEST(LemmaSource, ShippedSweep) {
  auto g = NullGrid::make(0.1, 30.0);
  auto sweep = default_source_sweep();
  EXPECT_EQ(sweep.size(), 10u);
  for (auto [p, q] : sweep) {
    auto r = verify_lemma_source(extremal_source(g, q, p), q, p);
    EXPECT_TRUE(r.pass) << p << " " << q;
    EXPECT_GE(r.margin, 1.0) << p << " " << q;
  }
}

TEST(LemmaPower, ZeroAndExtremal) {
  auto g = NullGrid::make(0.1, 30.0);
  std::vector<SpacetimeField> zero{SpacetimeField(g)};
  auto z = verify_lemma_power_p(zero, 3.0, 2.0);
  EXPECT_EQ(z.ratios.at(0), 0.0);

  auto u = extremal_field(g, 2.0);
  EXPECT_NEAR(norm_spacetime(u, 1.0, 2.0), 1.0, 1e-12);
  std::vector<SpacetimeField> one{u};
  auto r = verify_lemma_power_p(one, 3.0, 2.0);
  auto cube = map_physical(u, [](double x) { return std::pow(std::abs(x), 3.0); });
  EXPECT_NEAR(r.ratios.at(0), norm_spacetime(l0_apply(cube), 1.0, 2.0), 1e-12);
  EXPECT_NEAR(r.C_emp, r.ratios.at(0), 1e-15);
  EXPECT_FALSE(r.report.advisory);
  EXPECT_TRUE(verify_lemma_power_p(one, 2.2, 1.1).report.advisory);  // p <= 1 + √2
  EXPECT_THROW(verify_lemma_power_p(one, 3.0, 2.5), std::domain_error);
}

TEST(LemmaPower, FamilyStableUnderRefinement) {
  auto coarse = NullGrid::make(0.2, 30.0), fine = NullGrid::make(0.1, 30.0);
  auto a = verify_lemma_power_p(power_lemma_family(coarse, 2.0), 3.0, 2.0);
  auto b = verify_lemma_power_p(power_lemma_family(fine, 2.0), 3.0, 2.0);
  EXPECT_TRUE(stability_report("s", a.C_emp, b.C_emp).pass);
}

TEST(LemmaDecay, ExponentAndLinearity) {
  auto g = NullGrid::make(0.1, 100.0);
  auto a = verify_lemma_decay(1.0, 4.0, 2.0, g);
  EXPECT_TRUE(a.report.pass);
  EXPECT_NEAR(a.fit.exponent, 3.0, 0.2);
  auto b = verify_lemma_decay(2.0, 4.0, 2.0, g);
  EXPECT_NEAR(b.fit.coefficient, 2.0 * a.fit.coefficient, 1e-12 * std::abs(a.fit.coefficient));
  EXPECT_NEAR(b.C_emp, a.C_emp, 1e-12 * a.C_emp);
  auto z = verify_lemma_decay(0.0, 4.0, 2.0, g);
  EXPECT_TRUE(z.report.pass);
  EXPECT_THROW(verify_lemma_decay(1.0, 2.0, 2.0, g), std::domain_error);
}

TEST(TheoremBounds, LinearAndNonlinear) {
  auto g = NullGrid::make(0.1, 30.0);
  auto data = compact_bump_profile(1.0, 1.0);
  SchemeOptions o;
  o.N = 5;
  auto lin = picard_linear(zero_profile(), data, powerlaw_potential(3), 0.1, g, o);
  auto dn = data_norms(zero_profile(), data, 4.0, 2.0, 1e-3);
  TheoremContext ctx{c_m(4.0), dn.sum(), dn.eps()};
  auto r = verify_theorem_bounds(lin, ctx);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].check_id, "theorem_linear_norm");
  EXPECT_TRUE(r[0].pass);

  auto small = scaled(data, 1e-2);
  auto nl = picard_nonlinear(zero_profile(), small, NonlinearitySpec::monomial(3), g, o);
  auto dn2 = data_norms(zero_profile(), small, 4.0, 2.0, 1e-3);
  auto r2 = verify_theorem_bounds(nl, TheoremContext{5.0, dn2.sum(), dn2.eps()});
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_TRUE(r2[0].pass);
  EXPECT_NEAR(r2[0].rhs, 6 * 5.0 * dn2.eps(), 1e-15);

  // λ = 0: the full bound is M·C_m·ε with M = 3(1 + slack)
  auto full = picard_full(zero_profile(), small, powerlaw_potential(3), 0.0, NonlinearitySpec::monomial(3), g,
                          PotentialMode::perturbative, o);
  auto r3 = verify_theorem_bounds(full, TheoremContext{5.0, dn2.sum(), dn2.eps()});
  ASSERT_EQ(r3.size(), 1u);
  EXPECT_NEAR(r3[0].rhs, 3.0 * (1 + kDefaultSlack) * 5.0 * dn2.eps(), 1e-12);
}

TEST(MajorantDomination, CubicOrders) {
  auto g = NullGrid::make(0.1, 40.0);
  auto data = compact_bump_profile(1.0, 1.0);
  SchemeOptions o;
  o.N = 8;
  o.q = 2.0;
  auto run = perturb_nonlinear(zero_profile(), data, NonlinearitySpec::monomial(3), g, o);
  auto dn = data_norms(zero_profile(), data, 4.0, 2.0, 1e-3);
  std::vector<SpacetimeField> extra{run.element(1)};
  auto C = verify_lemma_power_p(power_lemma_family(g, 2.0, extra), 3.0, 2.0).C_emp;
  MajorantProblem pr;
  pr.C = C;
  pr.D = c_m(4.0) * dn.sum();
  pr.order = 12;
  auto w = solve_majorant(pr, NonlinearitySpec::monomial(3));
  auto reps = verify_majorant_domination(run, w);
  int orders = 0;
  for (auto& r : reps)
    if (r.check_id == "majorant_order") {
      ++orders;
      EXPECT_TRUE(r.pass) << r.params_json;
    }
  EXPECT_EQ(orders, 8);
  EXPECT_NEAR(reps.front().rhs, pr.D, 1e-12);
}

TEST(Equivalence, LinearIdentity) {
  auto g = NullGrid::make(0.1, 20.0);
  SchemeOptions o;
  o.N = 5;
  auto data = compact_bump_profile(1.0, 1.0);
  auto pic = picard_linear(zero_profile(), data, powerlaw_potential(3), 0.05, g, o);
  auto ser = perturb_linear(zero_profile(), data, powerlaw_potential(3), g, o);
  auto r = verify_linear_equivalence(pic, ser, 0.05);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.lhs, 1e-10);
  auto bad = verify_linear_equivalence(pic, ser, 0.06);
  EXPECT_FALSE(bad.pass);
}

TEST(Report, ParamsAreJson) {
  auto g = NullGrid::make(0.1, 10.0);
  auto r = verify_lemma_source(extremal_source(g, 3.0, 2.0), 3.0, 2.0);
  auto j = nlohmann::json::parse(r.params_json);
  EXPECT_DOUBLE_EQ(j.at("p").get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j.at("q").get<double>(), 3.0);
}
