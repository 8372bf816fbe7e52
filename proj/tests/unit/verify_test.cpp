#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "hslab/errors.hpp"
#include "hslab/limit_equation.hpp"
#include "hslab/verify.hpp"

namespace hslab {
namespace {

const EuclideanProblem& reference() {
  static const EuclideanProblem pb(ProblemParams{}, 0.5);
  return pb;
}

SolutionProfile ground_state(double npd) {
  ShootingOptions o;
  o.nodes_per_decade = npd;
  return solve_dirichlet_shooting(reference(), 0.2, 0, o);
}

double pohozaev_at(double npd) {
  const auto prof = ground_state(npd);
  const auto c = EquationCoefficients::from_problem(reference(), 0.2, prof.v.grid().inner());
  return pohozaev_residual(prof, c, prof.v.grid().inner(), 0.5).relative;
}

TEST(Pohozaev, GroundStateConvergesUnderRefinement) {
  const double a = pohozaev_at(50.0), b = pohozaev_at(100.0), c = pohozaev_at(200.0);
  EXPECT_GT(a / b, 8.0);
  EXPECT_GT(b / c, 8.0);
  EXPECT_LT(c, 1e-6);
}

TEST(Pohozaev, BreakdownOfTheReferenceSolution) {
  const auto prof = ground_state(200.0);
  const auto c = EquationCoefficients::from_problem(reference(), 0.2, prof.v.grid().inner());
  const auto poh = pohozaev_residual(prof, c, prof.v.grid().inner(), 0.5);
  EXPECT_TRUE(poh.jet_at_inner);
  EXPECT_EQ(poh.gamma_offset, 0.0);
  EXPECT_EQ(poh.s_offset, 0.0);
  EXPECT_EQ(poh.dh_term, 0.0);
  EXPECT_LT(poh.defect_term, 0.0);
  EXPECT_NEAR(poh.nonlinear_mass, nonlinear_mass(reference(), prof.v, 0.2), 1e-6 * poh.nonlinear_mass);
  EXPECT_GE(poh.max_term, poh.nonlinear_mass);
}

TEST(Pohozaev, LimitBubbleIsFluxBalanced) {
  const auto b = solve_limit_equation(5, 1.0, -2.0, b_at_origin(5, 1.0));
  const auto c = EquationCoefficients::limit(5, 1.0, -2.0, b.b0);
  const auto poh = pohozaev_residual(b.profile, c, 2.0, 30.0);
  EXPECT_LT(poh.relative, 1e-10);
  EXPECT_EQ(poh.h_term, 0.0);
  EXPECT_EQ(poh.db_term, 0.0);
}

TEST(Pohozaev, AnnulusOutsideTheGridThrows) {
  const auto prof = ground_state(50.0);
  const auto c = EquationCoefficients::from_problem(reference(), 0.2);
  EXPECT_THROW(pohozaev_residual(prof, c, 1e-3, 0.6), ExtrapolationError);
}

TEST(Hardy, SingleBumpHasPositiveMargin) {
  const auto g = RadialGrid::with_density(5e-3, 0.7, 400.0);
  const auto u = random_bump(7, 0, g, 1e-2, 0.6);
  const auto m = hardy_check(u, 5);
  EXPECT_GT(m.lhs, 0.0);
  EXPECT_GT(m.margin, 0.0);
  EXPECT_NEAR(m.relative, m.margin / m.rhs, 1e-15);
}

TEST(Hardy, SweepHasNoFailuresAndIsReproducible) {
  const auto a = hardy_sweep(5, 20240101, 100);
  EXPECT_EQ(a.samples, 100u);
  EXPECT_EQ(a.failures, 0u);
  EXPECT_GT(a.worst, 0.0);
  EXPECT_LE(a.worst, a.best);
  const auto b = hardy_sweep(5, 20240101, 100);
  EXPECT_EQ(a.worst, b.worst);
  EXPECT_EQ(a.best, b.best);
}

TEST(HardySobolev, QuotientsArePositiveAndStableAcrossSeeds) {
  const auto a = hardy_sobolev_sweep(5, 1.0, -2.0, 20240101, 200);
  const auto b = hardy_sobolev_sweep(5, 1.0, -2.0, 20240102, 200);
  EXPECT_EQ(a.failures, 0u);
  EXPECT_GT(a.worst, 0.0);
  EXPECT_NEAR(a.worst / b.worst, 1.0, 0.05);
}

TEST(HardySobolev, ZeroFunctionThrows) {
  const auto g = RadialGrid::with_density(5e-3, 0.7, 100.0);
  const auto u = RadialFunction::sample(g, [](double) { return 0.0; });
  EXPECT_THROW(hardy_sobolev_check(u, 5, 1.0, -2.0), DomainError);
}

TEST(RandomBump, DeterministicAndSupported) {
  const auto g = RadialGrid::with_density(5e-3, 0.7, 100.0);
  const auto a = random_bump(1, 3, g, 1e-2, 0.6);
  const auto b = random_bump(1, 3, g, 1e-2, 0.6);
  const auto c = random_bump(1, 4, g, 1e-2, 0.6);
  bool differs = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    differs = differs || a[i] != c[i];
    if (g[i] <= 1e-2 || g[i] >= 0.6) EXPECT_EQ(a[i], 0.0);
  }
  EXPECT_TRUE(differs);
}

TEST(AsymptoticExponent, ExactPowerLaw) {
  const auto g = RadialGrid::with_density(1e-6, 1.0, 50.0);
  const auto v = RadialFunction::sample(g, [](double r) { return 2.5 * std::pow(r, -0.7); });
  const auto fit = asymptotic_exponent(v, 1e-5, 1e-4);
  ASSERT_TRUE(fit.defined);
  EXPECT_NEAR(fit.slope, -0.7, 1e-10);
  EXPECT_NEAR(std::exp(fit.intercept), 2.5, 1e-9);
  EXPECT_EQ(fit.points, 51u);
}

TEST(AsymptoticExponent, CorrectionTermsRemoveBias) {
  const auto g = RadialGrid::with_density(1e-6, 1.0, 50.0);
  const auto v = RadialFunction::sample(g, [](double r) { return std::pow(r, -0.7) * (1.0 + 0.3 * std::sqrt(r)); });
  const auto plain = asymptotic_exponent(v, 1e-3, 1e-2);
  const auto corrected = asymptotic_exponent(v, 1e-3, 1e-2, {0.5, 1.0, 1.5});
  EXPECT_GT(std::abs(plain.slope + 0.7), 1e-3);
  EXPECT_LT(std::abs(corrected.slope + 0.7), 1e-5);
  ASSERT_EQ(corrected.corrections.size(), 3u);
  EXPECT_NEAR(corrected.corrections[0], 0.3 * std::sqrt(1e-2), 1e-3);
}

TEST(AsymptoticExponent, UndefinedAcrossSignChange) {
  const auto g = RadialGrid::with_density(1e-3, 1.0, 50.0);
  const auto v = RadialFunction::sample(g, [](double r) { return std::cos(20.0 * r); });
  EXPECT_FALSE(asymptotic_exponent(v, 0.01, 0.5).defined);
}

TEST(OriginCorrections, ReferenceExponents) {
  const auto e = origin_correction_exponents(reference(), 0.2);
  ASSERT_EQ(e.size(), 4u);
  const double bm = reference().exponents().beta_minus;
  const double sigma = 1.0 - bm * (8.0 / 3.0 - 0.2 - 2.0);
  EXPECT_NEAR(sigma, 1.262, 1e-3);
  for (double x : {sigma, 2.0, 2.0 * sigma, 3.0 * sigma})
    EXPECT_TRUE(std::any_of(e.begin(), e.end(), [&](double y) { return std::abs(x - y) < 1e-12; })) << x;
}

TEST(OriginSlope, GroundStateMatchesBetaMinus) {
  const auto prof = ground_state(200.0);
  const double r0 = prof.v.grid().inner();
  const auto fit = asymptotic_exponent(prof.v, 2.0 * r0, 20.0 * r0, origin_correction_exponents(reference(), 0.2));
  EXPECT_NEAR(-fit.slope, reference().exponents().beta_minus, 1e-6);
}

TEST(WindowStability, CorrectedFitIsStableNearTheOrigin) {
  const auto prof = ground_state(200.0);
  const auto corr = origin_correction_exponents(reference(), 0.2);
  for (double r1 : {2.0 * prof.v.grid().inner(), 1e-4}) {
    const auto ws = window_stability(prof.v, r1, 1.0, 0.5, corr);
    EXPECT_TRUE(ws.stable) << r1 << ' ' << ws.shift << ' ' << ws.base.std_error;
    EXPECT_NEAR(ws.shift, std::abs(ws.base.slope - ws.shifted.slope), 1e-15);
  }
}

TEST(EnergyLevels, SortedAndMonotone) {
  SolutionProfile a, b, c;
  a.node_count = 1; a.p_defect = 0.2; a.energy = 5.0;
  b.node_count = 0; b.p_defect = 0.2; b.energy = 1.0;
  c.node_count = 0; c.p_defect = 0.1; c.energy = 2.0;
  const auto t = energy_levels({a, b, c});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].node_count, 0);
  EXPECT_EQ(t.rows[0].p, 0.2);
  EXPECT_EQ(t.rows[2].node_count, 1);
  EXPECT_TRUE(t.all_positive);
  EXPECT_TRUE(t.monotone_in_nodes);
  a.energy = 0.5;
  EXPECT_FALSE(energy_levels({a, b, c}).monotone_in_nodes);
  b.energy = -1.0;
  EXPECT_FALSE(energy_levels({a, b, c}).all_positive);
}

TEST(VerificationReport, Serialisation) {
  VerificationReport rep;
  rep.provenance = "unit";
  rep.add("alpha", 1e-9, 1e-8, true);
  rep.add("beta", 0.25, 0.1, false, "too large");
  EXPECT_FALSE(rep.all_pass());
  const auto j = rep.to_json();
  EXPECT_EQ(j.at("provenance"), "unit");
  ASSERT_EQ(j.at("checks").size(), 2u);
  EXPECT_EQ(j.at("checks")[1].at("detail"), "too large");
  const auto csv = rep.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "name,value,tolerance,pass,detail");
  EXPECT_NE(csv.find("beta,0.25,0.10000000000000001,0,too large"), std::string::npos);
}

}  // namespace
}  // namespace hslab
