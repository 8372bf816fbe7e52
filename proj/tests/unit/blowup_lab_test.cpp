#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "hslab/blowup_lab.hpp"
#include "hslab/errors.hpp"

namespace hslab {
namespace {

const LimitBubble& unit_bubble() {
  static const LimitBubble b = solve_limit_equation(5, 1.0, -2.0, 1.0);
  return b;
}

RadialGrid fixture_grid() { return RadialGrid::with_density(1e-7, 10.0, 200.0); }

SolutionProfile planted(std::vector<double> mus) {
  return planted_bubbles(unit_bubble(), mus, 0.0, fixture_grid());
}

TEST(ConcentrationRadius, Exponent) {
  EXPECT_DOUBLE_EQ(concentration_radius(1e-3, 0.0, 8.0 / 3.0), 1e-3);
  EXPECT_NEAR(concentration_radius(1e-3, 1.0 / 3.0, 8.0 / 3.0), std::pow(1e-3, 0.5), 1e-15);
  EXPECT_THROW(concentration_radius(0.0, 0.0, 8.0 / 3.0), DomainError);
}

TEST(DetectScales, SingleBubble) {
  const auto s = detect_scales(planted({1e-3}), 0.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].mu / 1e-3, 1.0, 1e-3);
  EXPECT_NEAR(s[0].radius / (1e-3 * unit_bubble().peak_radius), 1.0, 1e-2);
}

TEST(DetectScales, TwoSeparatedBubbles) {
  const auto s = detect_scales(planted({1e-4, 1e-2}), 0.0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].mu / 1e-4, 1.0, 5e-3);
  EXPECT_NEAR(s[1].mu / 1e-2, 1.0, 5e-3);
}

TEST(DetectScales, CompactSolutionHasNoConcentration) {
  const auto prof = solve_dirichlet_shooting(EuclideanProblem(ProblemParams{}, 0.5), 0.2, 0);
  EXPECT_TRUE(detect_scales(prof, 0.2).empty());
}

TEST(DetectScales, OrderOfPlantingIsIrrelevant) {
  const auto a = detect_scales(planted({1e-4, 1e-2}), 0.0);
  const auto b = detect_scales(planted({1e-2, 1e-4}), 0.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a[i].mu, b[i].mu);
}

TEST(DetectScales, InsensitiveToTau) {
  const auto u = planted({1e-4, 1e-2});
  const auto e = exponent_set(5, 1.0, -2.0);
  const auto ref = detect_scales(u, 0.0);
  for (double w : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    DetectOptions o;
    o.tau = e.tau_lo + w * (e.tau_hi - e.tau_lo);
    const auto s = detect_scales(u, 0.0, o);
    ASSERT_EQ(s.size(), ref.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i].mu / ref[i].mu, 1.0, 0.05);
  }
}

TEST(Rescale, RecoversTheBubble) {
  const double mu = 1e-3;
  const auto r = rescale_profile(planted({mu}), mu, 0.0);
  EXPECT_FALSE(r.truncated);
  const auto& b = unit_bubble();
  for (double x : {0.1, 1.0, b.peak_radius, 100.0})
    EXPECT_NEAR(r.profile.v.at(x) / bubble_value(b, x), 1.0, 1e-8);
}

TEST(Rescale, InverseScalesComposeToIdentity) {
  const auto u = planted({1e-3});
  const auto back = rescale_profile(rescale_profile(u, 1e-3, 0.0).profile, 1e3, 0.0).profile;
  for (std::size_t i = 0; i < u.v.size(); i += 53) {
    EXPECT_NEAR(back.v.grid()[i] / u.v.grid()[i], 1.0, 1e-12);
    EXPECT_NEAR(back.v[i], u.v[i], 1e-12 * std::abs(u.v[i]));
  }
}

TEST(Rescale, PreservesDirichletEnergyAtCriticality) {
  const auto u = planted({1e-3});
  const auto r = rescale_profile(u, 1e-3, 0.0);
  EXPECT_NEAR(dirichlet_norm_sq(r.profile.dv, 5) / dirichlet_norm_sq(u.dv, 5), 1.0, 1e-12);
}

TEST(Rescale, TargetGridFlagsTruncation) {
  const auto u = planted({1e-3});
  const auto target = RadialGrid::with_density(1e-2, 1e6, 20.0);
  const auto r = rescale_profile(u, 1e-3, 0.0, target);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.profile.v[r.profile.v.size() - 1], 0.0);
}

TEST(Family, InvariantsHold) {
  const auto fam = build_family(planted({1e-4, 1e-2}), 0.0);
  ASSERT_EQ(fam.mu.size(), 2u);
  EXPECT_NO_THROW(fam.validate(8.0 / 3.0));
  auto bad = fam;
  std::swap(bad.mu[0], bad.mu[1]);
  EXPECT_THROW(bad.validate(8.0 / 3.0), std::logic_error);
  bad = fam;
  bad.t[0] = 1.5;
  EXPECT_THROW(bad.validate(8.0 / 3.0), std::logic_error);
}

TEST(EstimateT, LastSampleAndExtrapolation) {
  const std::vector<double> p{0.2, 0.1}, mu{1e-2, 1e-2};
  EXPECT_NEAR(estimate_t(p, mu), std::pow(1e-2, 0.1), 1e-15);
  EXPECT_NEAR(estimate_t(p, mu, true), 2.0 * std::pow(1e-2, 0.1) - std::pow(1e-2, 0.2), 1e-12);
}

TEST(Envelope, BoundsPlantedStack) {
  const std::vector<double> mus{1e-4, 1e-2};
  const auto u = planted(mus);
  // the far tail of the unit bubble sets the constant: C = K_+
  const double k_plus = unit_bubble().K_plus;
  const auto env = envelope_check(u, mus, 0.0, 1.01 * k_plus);
  EXPECT_TRUE(env.pass);
  EXPECT_NEAR(env.c_fit / k_plus, 1.0, 1e-2);
  EXPECT_EQ(env.annuli.size(), 9u);
  const auto worse = envelope_check(u, std::vector<double>{1e-4}, 0.0);
  EXPECT_GT(worse.c_fit, 10.0 * env.c_fit);
}

TEST(Envelope, ZeroProfile) {
  auto u = planted({1e-3});
  u.v = RadialFunction::sample(u.v.grid(), [](double) { return 0.0; });
  EXPECT_EQ(envelope_check(u, std::vector<double>{1e-3}, 0.0).c_fit, 0.0);
}

TEST(OriginWeightedSup, PowerLaw) {
  SolutionProfile u;
  u.params = ProblemParams{};
  const double bm = exponent_set(5, 1.0, -2.0).beta_minus;
  u.v = RadialFunction::sample(fixture_grid(), [&](double r) { return 3.0 * std::pow(r, -bm); });
  EXPECT_NEAR(origin_weighted_sup(u), 3.0, 1e-12);
}

TEST(RateCheck, SyntheticFamilyAndSignContradiction) {
  const ProblemParams prm;
  const double L = 0.37;
  std::vector<RateSample> samples;
  for (double mu : {1e-2, 5e-3, 2.5e-3}) {
    const double x = std::pow(mu, 2.0 - prm.theta);
    samples.push_back({L * x * (1.0 + 3.0 * x), mu});
  }
  const auto b = bubble_integrals(rescale_profile(planted({1e-3}), 1e-3, 0.0).profile, prm.theta);
  EXPECT_GT(b.mass_s, 0.0);
  const std::vector<BubbleIntegral> bubbles{b};
  const auto plain = rate_check(samples, prm, 1.0, bubbles);
  ASSERT_TRUE(plain.applicable);
  EXPECT_NEAR(plain.measured_limit / L, 1.0, 0.02);
  const auto rich = rate_check(samples, prm, 1.0, bubbles, true);
  EXPECT_NEAR(rich.measured_limit / L, 1.0, 1e-6);
  EXPECT_LT(plain.formula, 0.0);
  EXPECT_TRUE(plain.sign_contradiction);

  ProblemParams neg = prm;
  neg.c = -1.0;
  EXPECT_FALSE(rate_check(samples, neg, 1.0, bubbles).sign_contradiction);
  EXPECT_FALSE(rate_check({}, prm, 1.0, bubbles).applicable);
}

TEST(Verdict, Classes) {
  const ProblemParams prm;
  std::vector<FamilySample> compact, blowup, stalled;
  double inc = 1.0;
  for (int k = 0; k < 6; ++k, inc *= 0.3) {
    compact.push_back({0.4 / (1 << k), 1.0 + 0.01 * k, 1.0, k ? inc : 0.0});
    blowup.push_back({0.4 / (1 << k), std::pow(10.0, k), 1.0, 1.0});
    stalled.push_back({0.4 / (1 << k), 1.0, 1.0, k ? 1.0 : 0.0});
  }
  const auto c = compactness_verdict(compact, prm);
  EXPECT_EQ(c.verdict, Verdict::Compact);
  EXPECT_TRUE(c.consistent);
  const auto b = compactness_verdict(blowup, prm);
  EXPECT_EQ(b.verdict, Verdict::Blowup);
  EXPECT_FALSE(b.consistent);
  EXPECT_EQ(compactness_verdict(stalled, prm).verdict, Verdict::Inconclusive);
  EXPECT_EQ(compactness_verdict(std::span<const FamilySample>{}, prm).verdict, Verdict::Inconclusive);
  EXPECT_EQ(to_string(Verdict::Blowup), "BLOWUP");
}

TEST(BubbleCountBound, Formula) {
  const double tss = 8.0 / 3.0;
  EXPECT_NEAR(bubble_count_bound(2.0, 1.0, 0.5, tss), 2.0 * std::pow(2.0, tss / (tss - 2.0)), 1e-12);
  EXPECT_THROW(bubble_count_bound(2.0, 1.0, 0.0, tss), DomainError);
}

}  // namespace
}  // namespace hslab
