#include <cmath>

#include <gtest/gtest.h>

#include "hslab/blowup_lab.hpp"
#include "hslab/continuation.hpp"
#include "hslab/errors.hpp"

namespace hslab {
namespace {

TEST(Schedule, Validation) {
  const double ts = 8.0 / 3.0;
  EXPECT_NO_THROW((ContinuationSchedule{{0.4, 0.2, 0.0}}.validate(ts)));
  EXPECT_THROW((ContinuationSchedule{{}}.validate(ts)), DomainError);
  EXPECT_THROW((ContinuationSchedule{{0.7, 0.2}}.validate(ts)), DomainError);
  EXPECT_THROW((ContinuationSchedule{{0.2, 0.2}}.validate(ts)), DomainError);
  EXPECT_THROW((ContinuationSchedule{{0.2, 0.3}}.validate(ts)), DomainError);
  EXPECT_THROW((ContinuationSchedule{{0.2, -0.1}}.validate(ts)), DomainError);
}

TEST(Schedule, Halving) {
  const auto s = ContinuationSchedule::halving(0.4, 3);
  ASSERT_EQ(s.p_values.size(), 5u);
  EXPECT_DOUBLE_EQ(s.p_values[3], 0.05);
  EXPECT_EQ(s.p_values.back(), 0.0);
  EXPECT_EQ(ContinuationSchedule::halving(0.4, 3, false).p_values.size(), 4u);
}

TEST(GeometricDecay, ExactGeometricSequence) {
  const std::vector<double> inc{1.0, 0.5, 0.25, 0.125};
  const auto d = geometric_decay(inc);
  EXPECT_TRUE(d.geometric);
  EXPECT_NEAR(d.fitted_rate, 0.5, 1e-12);
  for (double r : d.ratios) EXPECT_NEAR(r, 0.5, 1e-15);
}

TEST(GeometricDecay, RejectsGrowthAndSlowDecay) {
  EXPECT_FALSE(geometric_decay(std::vector<double>{1.0, 0.5, 0.6}).geometric);
  EXPECT_FALSE(geometric_decay(std::vector<double>{1.0, 0.9, 0.81}).geometric);
  EXPECT_TRUE(geometric_decay(std::vector<double>{1.0, 0.9, 0.81}, 0.95).geometric);
}

TEST(WeightedSups, PowerLaw) {
  const auto g = RadialGrid::with_density(1e-3, 1.0, 50.0);
  const auto v = RadialFunction::sample(g, [](double r) { return std::pow(r, -0.5); });
  EXPECT_NEAR(tau_weighted_sup(v, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(weighted_sup(v, 5, 0.0, 8.0 / 3.0), 1.0, 1e-12);
}

class ReferenceContinuation : public ::testing::Test {
protected:
  static const ContinuationRun& run() {
    static const ContinuationRun r = continuation_to_critical(
        EuclideanProblem(ProblemParams{}, 0.5),
        ContinuationSchedule{{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.0}}, 0);
    return r;
  }
};

TEST_F(ReferenceContinuation, ReachesTheCriticalExponent) {
  const auto& r = run();
  ASSERT_FALSE(r.failure_index.has_value()) << r.failure_message;
  ASSERT_EQ(r.steps.size(), 7u);
  EXPECT_EQ(r.steps.back().p, 0.0);
  EXPECT_NEAR(r.steps.front().profile.K0 / 733656.926, 1.0, 1e-6);
  EXPECT_NEAR(r.steps[1].profile.K0, 7116.991209, 1e-3);
  for (const auto& s : r.steps) {
    EXPECT_TRUE(s.profile.converged);
    EXPECT_EQ(s.profile.node_count, 0);
  }
  EXPECT_TRUE(r.regime.multiplicity_regime);
}

TEST_F(ReferenceContinuation, IncrementsDecayAndVerdictIsCompact) {
  const auto& r = run();
  std::vector<double> inc;
  for (std::size_t k = 1; k < r.steps.size(); ++k) inc.push_back(r.steps[k].increment);
  const auto d = geometric_decay(inc);
  EXPECT_TRUE(d.geometric);
  EXPECT_LT(d.fitted_rate, 0.75);
  const auto verdict = compactness_verdict(r, ProblemParams{});
  EXPECT_EQ(verdict.verdict, Verdict::Compact);
  EXPECT_TRUE(verdict.theory_compact);
  EXPECT_TRUE(verdict.consistent);
  EXPECT_LT(verdict.sup_growth, 10.0);
}

TEST(Continuation, FailureTruncatesTheRun) {
  ShootingOptions o;
  o.log10_K_max = 4.0;
  o.K_hint.reset();
  const auto r = continuation_to_critical(EuclideanProblem(ProblemParams{}, 0.5),
                                          ContinuationSchedule{{0.4, 0.2}}, 0, o);
  ASSERT_TRUE(r.failure_index.has_value());
  EXPECT_EQ(*r.failure_index, 0u);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_FALSE(r.failure_message.empty());
}

}  // namespace
}  // namespace hslab
