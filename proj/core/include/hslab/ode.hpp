#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace hslab {

using State2 = std::array<double, 2>;
/// dy/dt = F(t, y) for a planar system.
using PlanarRhs = std::function<void(const State2& y, State2& dydt, double t)>;

struct OdeOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  double initial_step = 1e-3;
  /// Integration stops (diverged) once |y[0]| exceeds this bound.
  double overflow_bound = 1e300;
};

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<State2> y;   ///< y[i] at t[i]; shorter than the request when diverged
  bool diverged = false;
  double stop_time = 0.0;  ///< last time reached
  std::size_t steps = 0;
};

/// Integrates with an embedded Runge-Kutta-Fehlberg 7(8) pair under step-size
/// control and records the state exactly at `times` (monotone, either
/// direction). times[0] is the initial time.
OdeTrajectory integrate_sampled(const PlanarRhs& rhs, State2 y0, std::span<const double> times,
                                const OdeOptions& opts = {});

}  // namespace hslab
