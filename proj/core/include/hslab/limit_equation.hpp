#pragma once

#include "hslab/radial_solver.hpp"

namespace hslab {

struct LimitOptions {
  double decades_each_side = 5.0;  ///< grid spans this many decades around the peak
  double nodes_per_decade = 200.0;
  double rel_tol = 1e-12;
};

/// Positive entire solution of -Delta u - gamma u/r^2 = b0 u^{2*(s)-1}/r^s.
///
/// Normalised so that u = 1 at the maximiser of r^{(n-2)/2} u(r).
struct LimitBubble {
  SolutionProfile profile;
  double b0 = 1.0;
  double peak_radius = 0.0;       ///< maximiser of r^{(n-2)/2} u
  double K_minus = 0.0;           ///< lim r^{beta_-} u at 0
  double K_plus = 0.0;            ///< lim r^{beta_+} u at infinity
  double value_mismatch = 0.0;    ///< relative jump of u at the matching radius
  bool converged = false;
};

/// Two-sided shooting: forward from 0 on the beta_- branch, backward from a
/// large radius on the beta_+ branch, matched in r u'/u at the transition
/// radius. Both directions integrate the non-growing mode, so the decaying
/// tail is resolved to full relative accuracy.
LimitBubble solve_limit_equation(int n, double s, double gamma, double b0,
                                 const LimitOptions& opts = {});

/// Scale-free radial quotient of the computed bubble,
///   (int |u'|^2 - gamma u^2/r^2) / (int u^{2*(s)} r^{-s})^{2/2*(s)}.
double limit_bubble_quotient(int n, double s, double gamma, const LimitOptions& opts = {});

}  // namespace hslab
