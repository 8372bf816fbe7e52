#include "hslab/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/errors.hpp"

namespace hslab {

void ContinuationSchedule::validate(double two_star_s) const {
  if (p_values.empty()) throw DomainError("continuation schedule is empty");
  if (!(p_values.front() < two_star_s - 2.0))
    throw DomainError("continuation schedule must start below 2*(s) - 2");
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    if (!(p_values[i] >= 0.0)) throw DomainError("continuation defects must be non-negative");
    if (i > 0 && !(p_values[i] < p_values[i - 1]))
      throw DomainError("continuation schedule must be strictly decreasing");
  }
}

ContinuationSchedule ContinuationSchedule::halving(double p0, int halvings, bool end_at_zero) {
  ContinuationSchedule s;
  double p = p0;
  for (int k = 0; k <= halvings; ++k, p *= 0.5) s.p_values.push_back(p);
  if (end_at_zero) s.p_values.push_back(0.0);
  return s;
}

double weighted_sup(const RadialFunction& v, int n, double p, double two_star_s) {
  const double e = 1.0 - p / (two_star_s - 2.0);
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    m = std::max(m, std::pow(v.grid()[i], 0.5 * (n - 2.0)) * std::pow(std::abs(v[i]), e));
  return m;
}

double tau_weighted_sup(const RadialFunction& v, double tau) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    m = std::max(m, std::pow(v.grid()[i], tau) * std::abs(v[i]));
  return m;
}

ContinuationRun continuation_to_critical(const EuclideanProblem& pb,
                                         const ContinuationSchedule& schedule, int node_target,
                                         const ShootingOptions& opts) {
  const auto& e = pb.exponents();
  schedule.validate(e.two_star_s);
  ContinuationRun run;
  run.regime = admissibility(pb.params());

  ShootingOptions o = opts;
  for (std::size_t k = 0; k < schedule.p_values.size(); ++k) {
    const double p = schedule.p_values[k];
    ContinuationStep step;
    step.p = p;
    try {
      step.profile = solve_dirichlet_shooting(pb, p, node_target, o);
    } catch (const std::exception& ex) {
      run.failure_index = k;
      run.failure_message = ex.what();
      break;
    }
    const auto& prof = step.profile;
    step.h1_norm = std::sqrt(dirichlet_norm_sq(prof.dv, pb.params().n));
    step.nonlinear_mass = nonlinear_mass(pb, prof.v, p);
    step.weighted_sup = weighted_sup(prof.v, pb.params().n, p, e.two_star_s);
    step.tau_sup = tau_weighted_sup(prof.v, e.tau_mid());
    if (!run.steps.empty()) {
      const auto& prev = run.steps.back().profile.v;
      double d = 0.0;
      for (std::size_t i = 0; i < prof.v.size(); ++i) d = std::max(d, std::abs(prof.v[i] - prev[i]));
      step.increment = d;
    }
    if (schedule.warm_start) o.K_hint = prof.K0;
    run.steps.push_back(std::move(step));
  }
  return run;
}

DecayReport geometric_decay(std::span<const double> inc, double max_rate) {
  DecayReport rep;
  if (inc.size() < 2) return rep;
  bool all_below = true;
  for (std::size_t i = 0; i + 1 < inc.size(); ++i) {
    const double r = inc[i + 1] / inc[i];
    rep.ratios.push_back(r);
    all_below = all_below && r < 1.0;
  }
  for (double x : inc)
    if (!(x > 0.0)) return rep;
  const double m = static_cast<double>(inc.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const double x = static_cast<double>(i), y = std::log(inc[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.fitted_rate = std::exp(slope);
  rep.geometric = all_below && rep.fitted_rate <= max_rate;
  return rep;
}

}  // namespace hslab
