#pragma once

#include <functional>
#include <optional>

#include "hslab/conformal_bridge.hpp"
#include "hslab/radial_solver.hpp"

namespace hslab {

struct VariationalOptions {
  double nodes_per_decade = 200.0;
  double inner_fraction = 1e-5;  ///< r0 = inner_fraction * R
  double step = 1.0;             ///< Sobolev-gradient step in (0, 1]
  double tol = 1e-12;            ///< relative sup-norm change between iterates
  int max_iterations = 5000;
};

struct VariationalResult {
  SolutionProfile profile;
  int iterations = 0;
  double last_change = 0.0;
  double nehari_defect = 0.0;  ///< |<I'(v), v>| / <A v, v> on the final iterate
  bool converged = false;
};

/// Ground state of the discretised functional
///   I(v) = omega (1/2 a(v, v) - 1/q int b |v|^q r^{-s} r^{n-1} dr),
///   a(v, v) = int (v'^2 - gamma v^2/r^2 - h v^2) r^{n-1} dr,
/// with P1 elements in log r. Each step moves along the gradient in the
/// a-inner product, v <- (1 - step) v + step A^{-1} g(v), then rescales onto
/// the Nehari set a(v, v) = int b |v|^q r^{-s}. Requires a coercive form.
/// A stall returns the last iterate with converged = false.
VariationalResult solve_variational(const EuclideanProblem& problem, double p,
                                    const VariationalOptions& opts = {});

struct LinearSourceResult {
  RadialFunction descent;  ///< steepest descent in the stiffness metric
  RadialFunction direct;   ///< tridiagonal solve of A v = F
  int iterations = 0;
  bool converged = false;
};

/// Minimiser of 1/2 a(v, v) - int f v r^{n-1} dr on `grid` (v = 0 at the outer
/// node), computed both by preconditioned steepest descent and directly.
LinearSourceResult minimize_linear_source(const EuclideanProblem& problem, const RadialGrid& grid,
                                          const std::function<double(double)>& f,
                                          double tol = 1e-12, int max_iterations = 10000);

}  // namespace hslab
