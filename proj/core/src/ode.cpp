#include "hslab/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

namespace hslab {

namespace {

struct Overflow {
  double time;
};

}  // namespace

OdeTrajectory integrate_sampled(const PlanarRhs& rhs, State2 y0, std::span<const double> times,
                                const OdeOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  if (times.size() < 2) throw std::invalid_argument("integrate_sampled: need >= 2 times");
  const double dir = times.back() > times.front() ? 1.0 : -1.0;

  // Reverse-time runs are mapped to forward time s = -t.
  std::vector<double> s(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) s[i] = dir * times[i];
  auto sys = [&](const State2& y, State2& dy, double si) {
    rhs(y, dy, dir * si);
    dy[0] *= dir;
    dy[1] *= dir;
  };

  OdeTrajectory out;
  out.t.reserve(times.size());
  out.y.reserve(times.size());
  auto observer = [&](const State2& y, double si) {
    if (!(std::abs(y[0]) <= opts.overflow_bound) || !std::isfinite(y[1])) throw Overflow{dir * si};
    out.t.push_back(dir * si);
    out.y.push_back(y);
  };

  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol,
                                         odeint::runge_kutta_fehlberg78<State2>());
  try {
    out.steps = odeint::integrate_times(stepper, sys, y0, s.begin(), s.end(), opts.initial_step,
                                        observer);
    out.stop_time = out.t.back();
  } catch (const Overflow& o) {
    out.diverged = true;
    out.stop_time = o.time;
  } catch (const odeint::step_adjustment_error&) {
    out.diverged = true;
    out.stop_time = out.t.empty() ? times.front() : out.t.back();
  } catch (const odeint::no_progress_error&) {
    out.diverged = true;
    out.stop_time = out.t.empty() ? times.front() : out.t.back();
  }
  return out;
}

}  // namespace hslab
