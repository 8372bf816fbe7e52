#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hslab/errors.hpp"
#include "hslab/grid.hpp"
#include "hslab/ode.hpp"
#include "hslab/quadrature.hpp"
#include "hslab/tridiagonal.hpp"

namespace hslab {
namespace {

TEST(RadialGrid, LogSpacingHitsBothEnds) {
  const auto g = RadialGrid::log_spaced(1e-6, 0.5, 101);
  EXPECT_EQ(g.size(), 101u);
  EXPECT_DOUBLE_EQ(g.inner(), 1e-6);
  EXPECT_NEAR(g.outer(), 0.5, 1e-15);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(std::log(g[i] / g[i - 1]), g.log_step(), 1e-12);
}

TEST(RadialGrid, DensityAndRefinement) {
  const auto g = RadialGrid::with_density(1e-4, 1e-1, 50.0);
  EXPECT_NEAR(g.nodes_per_decade(), 50.0, 1e-9);
  const auto f = g.refined();
  EXPECT_EQ(f.size(), 2 * g.size() - 1);
  EXPECT_NEAR(f.log_step(), 0.5 * g.log_step(), 1e-15);
}

TEST(RadialGrid, UnitBallGuard) {
  EXPECT_NO_THROW(RadialGrid::log_spaced(0.1, 0.9, 10).require_unit_ball());
  EXPECT_THROW(RadialGrid::log_spaced(0.1, 2.0, 10).require_unit_ball(), DomainError);
}

TEST(RadialFunction, InterpolationIsHighOrder) {
  const auto g = RadialGrid::with_density(1e-3, 0.9, 100.0);
  const auto u = RadialFunction::sample(g, [](double r) { return std::sin(3.0 * r) * r; });
  for (double r : {2e-3, 0.0123, 0.333, 0.77}) EXPECT_NEAR(u.at(r), std::sin(3.0 * r) * r, 1e-8);
  EXPECT_THROW(u.at(0.95), ExtrapolationError);
}

TEST(RadialFunction, DerivativeIsFourthOrder) {
  auto err = [](double npd) {
    const auto g = RadialGrid::with_density(1e-2, 0.9, npd);
    const auto u = RadialFunction::sample(g, [](double r) { return std::pow(r, 1.5) * std::exp(-r); });
    const auto du = u.derivative();
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g[i];
      e = std::max(e, std::abs(du[i] - (1.5 / r - 1.0) * std::pow(r, 1.5) * std::exp(-r)));
    }
    return e;
  };
  EXPECT_GT(err(40.0) / err(80.0), 10.0);
  EXPECT_GT(err(80.0) / err(160.0), 12.0);
}

TEST(RadialFunction, SignChanges) {
  const auto g = RadialGrid::with_density(1e-2, 0.9, 50.0);
  const auto u = RadialFunction::sample(g, [](double r) { return std::cos(10.0 * r); });
  EXPECT_EQ(u.sign_changes(), 3);
}

TEST(Simpson, ExactForCubics) {
  std::vector<double> y;
  const double h = 0.1;
  for (int i = 0; i <= 10; ++i) y.push_back(std::pow(i * h, 3));
  EXPECT_NEAR(simpson(y, h).value, 0.25, 1e-14);
  y.push_back(std::pow(1.1, 3));
  EXPECT_NEAR(simpson(y, h).value, std::pow(1.1, 4) / 4.0, 1e-13);
}

TEST(Quadrature, AdaptiveAndLogMapped) {
  const auto q = integrate_adaptive([](double x) { return std::exp(-x * x); }, -5.0, 5.0);
  EXPECT_NEAR(q.value, std::sqrt(std::numbers::pi) * std::erf(5.0), 1e-13);
  const auto l = integrate_log_adaptive([](double r) { return std::pow(r, -0.9); }, 1e-12, 1.0);
  EXPECT_NEAR(l.value, 10.0 * (1.0 - std::pow(1e-12, 0.1)), 1e-10);
}

TEST(Quadrature, PanelNeverThrows) {
  const auto q = integrate_panel([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1, 1e-15);
  EXPECT_TRUE(std::isfinite(q.value));
  EXPECT_NEAR(q.value, 0.29, 1e-3);
}

TEST(Tridiagonal, SolveAndInertia) {
  SymTridiag a(4);
  a.diag = {2, 2, 2, 2};
  a.off = {-1, -1, -1};
  const std::vector<double> x{1, 2, 3, 4};
  const auto b = a.apply(x);
  const auto y = solve_tridiagonal(a, b);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
  EXPECT_EQ(negative_inertia(a), 0u);
  SymTridiag id(4);
  id.diag = {1, 1, 1, 1};
  EXPECT_EQ(negative_inertia(a.shifted(2.0, id)), 2u);
}

TEST(Tridiagonal, SmallestEigenpairOfDiscreteLaplacian) {
  const std::size_t n = 50;
  SymTridiag a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.diag[i] = 2.0;
    b.diag[i] = 1.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) a.off[i] = -1.0;
  const auto e = smallest_generalized_eigenpair(a, b);
  ASSERT_TRUE(e.converged);
  const double exact = 2.0 - 2.0 * std::cos(std::numbers::pi / (n + 1));
  EXPECT_NEAR(e.value, exact, 1e-12);
}

TEST(Ode, HarmonicOscillatorOverManyPeriods) {
  const PlanarRhs rhs = [](const State2& y, State2& d, double) {
    d[0] = y[1];
    d[1] = -y[0];
  };
  std::vector<double> times{0.0, 10.0, 100.0};
  const auto tr = integrate_sampled(rhs, {1.0, 0.0}, times);
  ASSERT_EQ(tr.y.size(), 3u);
  EXPECT_NEAR(tr.y[2][0], std::cos(100.0), 1e-9);
  EXPECT_NEAR(tr.y[2][1], -std::sin(100.0), 1e-9);
}

TEST(Ode, BackwardIntegration) {
  const PlanarRhs rhs = [](const State2& y, State2& d, double) {
    d[0] = y[1];
    d[1] = y[0];
  };
  std::vector<double> times{1.0, 0.0};
  const auto tr = integrate_sampled(rhs, {std::exp(1.0), std::exp(1.0)}, times);
  EXPECT_NEAR(tr.y.back()[0], 1.0, 1e-11);
}

}  // namespace
}  // namespace hslab
