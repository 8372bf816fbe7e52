#pragma once

#include <functional>

namespace hslab {

/// Value and absolute error estimate of an adaptive quadrature.
struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  ///< integral of |f|, used for relative tolerances
  bool converged = true;
};

struct QuadOptions {
  double rel_tol = 1e-13;
  unsigned max_depth = 15;  ///< panel-bisection budget
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Throws QuadratureError with the
/// partial estimate when the panel budget is exhausted before the tolerance.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opts = {});

/// Gauss-Kronrod on one panel with a small refinement budget. Never throws;
/// `converged` reports whether the tolerance was met.
QuadResult integrate_panel(const std::function<double(double)>& f, double a, double b,
                           unsigned max_depth = 4, double rel_tol = 1e-14);

/// Integral of F(r) dr over [r_lo, r_hi], evaluated in t = log r.
QuadResult integrate_log_adaptive(const std::function<double(double)>& f, double r_lo,
                                  double r_hi, const QuadOptions& opts = {});

}  // namespace hslab
