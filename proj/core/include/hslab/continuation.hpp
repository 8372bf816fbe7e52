#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hslab/radial_solver.hpp"

namespace hslab {

/// Decreasing defects p for the family of subcritical solves.
struct ContinuationSchedule {
  std::vector<double> p_values;
  bool warm_start = true;

  /// Throws DomainError unless strictly decreasing, non-negative and below
  /// 2*(s) - 2.
  void validate(double two_star_s) const;

  /// {p0, p0/2, ..., p0/2^{halvings}} followed by 0 when `end_at_zero`.
  static ContinuationSchedule halving(double p0, int halvings, bool end_at_zero = true);
};

struct ContinuationStep {
  double p = 0.0;
  SolutionProfile profile;
  double h1_norm = 0.0;         ///< (int |v'|^2 r^{n-1} dr)^{1/2}, times omega^{1/2}
  double nonlinear_mass = 0.0;  ///< omega int b |v|^q r^{-s} r^{n-1} dr
  double weighted_sup = 0.0;    ///< sup r^{(n-2)/2} |v|^{1 - p/(2*(s)-2)}
  double tau_sup = 0.0;         ///< sup r^tau |v| at the midpoint tau
  double increment = 0.0;       ///< sup |v_k - v_{k-1}| (0 for the first step)
};

struct ContinuationRun {
  std::vector<ContinuationStep> steps;
  std::optional<std::size_t> failure_index;  ///< schedule index of the failed solve
  std::string failure_message;
  RegimeReport regime;
};

/// Solves along the schedule, each solve seeded with the previous K when
/// warm_start is set. A failed solve truncates the run.
ContinuationRun continuation_to_critical(const EuclideanProblem& problem,
                                         const ContinuationSchedule& schedule, int node_target,
                                         const ShootingOptions& opts = {});

struct DecayReport {
  std::vector<double> ratios;  ///< increment[k+1] / increment[k]
  double fitted_rate = 0.0;    ///< exp of the least-squares slope of log increment
  bool geometric = false;      ///< all ratios < 1 and fitted_rate <= max_rate
};

/// Geometric-decay test for a sequence of positive increments.
DecayReport geometric_decay(std::span<const double> increments, double max_rate = 0.75);

/// Weighted sups used by the concentration detectors.
double weighted_sup(const RadialFunction& v, int n, double p, double two_star_s);
double tau_weighted_sup(const RadialFunction& v, double tau);

}  // namespace hslab
