#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hslab {

/// Radial nodes equally spaced in t = log r on [inner, outer].
///
/// Every integrand in this library scales like a power of r near the origin,
/// so log spacing turns those power laws into smooth functions of t and lets
/// one grid resolve many decades. Ball grids (outer < 1) are the ones the
/// hyperbolic routines accept; Euclidean grids may extend past 1 (bubbles on
/// R^n).
class RadialGrid {
public:
  RadialGrid() = default;

  static RadialGrid log_spaced(double inner, double outer, std::size_t nodes);
  static RadialGrid with_density(double inner, double outer, double nodes_per_decade);

  std::size_t size() const noexcept { return r_.size(); }
  double operator[](std::size_t i) const noexcept { return r_[i]; }
  std::span<const double> nodes() const noexcept { return r_; }

  double inner() const noexcept { return r_.front(); }
  double outer() const noexcept { return r_.back(); }
  double log_inner() const noexcept { return t0_; }
  double log_step() const noexcept { return dt_; }
  double log_node(std::size_t i) const noexcept { return t0_ + dt_ * static_cast<double>(i); }
  double nodes_per_decade() const noexcept;

  bool inside_unit_ball() const noexcept { return !r_.empty() && r_.back() < 1.0; }
  /// Throws DomainError unless all nodes lie in (0, 1).
  void require_unit_ball() const;

  bool contains(double r) const noexcept;

  /// Same log spacing, every radius multiplied by `factor`.
  RadialGrid dilated(double factor) const;
  /// Halved log step, same endpoints (2N-1 nodes).
  RadialGrid refined() const;
  /// Nodes of this grid restricted to [a, b], snapped outward to node positions.
  RadialGrid window(double a, double b) const;

private:
  RadialGrid(double t0, double dt, std::size_t n);

  double t0_ = 0.0;
  double dt_ = 0.0;
  std::vector<double> r_;
};

/// Real samples on a RadialGrid with local Lagrange interpolation in log r.
class RadialFunction {
public:
  RadialFunction() = default;
  RadialFunction(RadialGrid grid, std::vector<double> values, int interpolation_order = 5);

  template <class F>
  static RadialFunction sample(const RadialGrid& grid, F&& f, int interpolation_order = 5) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    return RadialFunction(grid, std::move(v), interpolation_order);
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  int interpolation_order() const noexcept { return order_; }

  /// Interpolated value; throws ExtrapolationError outside [inner, outer].
  double at(double r) const;

  /// d/dt samples, t = log r (fourth order).
  RadialFunction log_derivative() const;
  /// d/dr samples (fourth order).
  RadialFunction derivative() const;

  double sup_norm() const noexcept;
  /// Number of strict sign changes between consecutive nonzero samples.
  int sign_changes() const noexcept;

private:
  RadialGrid grid_;
  std::vector<double> values_;
  int order_ = 5;
};

/// Result of a fixed-sample quadrature with a Richardson error estimate.
struct SampledIntegral {
  double value = 0.0;
  double error = 0.0;
};

/// Fourth-order first derivative of uniformly spaced samples (5-point stencils,
/// one-sided at both ends).
std::vector<double> uniform_derivative(std::span<const double> y, double h);
/// Fourth-order second derivative of uniformly spaced samples.
std::vector<double> uniform_second_derivative(std::span<const double> y, double h);

/// Composite Simpson rule on uniformly spaced samples (3/8 closure for an odd
/// interval count). Error is |S_h - S_2h| / 15 when a coarse pass is possible.
SampledIntegral simpson(std::span<const double> y, double h);

/// Integral over [inner, outer] of a function of r sampled on `grid`,
/// evaluated as the t-integral of F(e^t) e^t.
SampledIntegral integrate_dr(const RadialGrid& grid, std::span<const double> integrand);

/// Lagrange interpolation of uniformly spaced samples at fractional index x
/// using `order + 1` points centred on x.
double lagrange_uniform(std::span<const double> y, double x, int order);

/// Piecewise cubic Hermite table of a smooth function of t = log r. Used to
/// cache expensive coefficients (quadrature-backed weights) for the ODE
/// right-hand sides.
class LogHermiteTable {
public:
  LogHermiteTable() = default;
  /// `value_and_dlogr(r)` returns {g(r), dg/dt} for t = log r.
  LogHermiteTable(double inner, double outer, std::size_t nodes,
                  const std::function<std::pair<double, double>(double)>& value_and_dlogr);

  /// Table from precomputed node values and t-slopes on t = log_inner + i * log_step.
  static LogHermiteTable from_samples(double log_inner, double log_step, std::vector<double> values,
                                      std::vector<double> slopes);

  bool empty() const noexcept { return values_.empty(); }
  double inner() const noexcept;
  double outer() const noexcept;
  /// Value at radius r; clamps to the end values outside the table.
  double operator()(double r) const noexcept { return eval_log(std::log(r)); }
  double eval_log(double t) const noexcept;
  /// d/dt at t = log r.
  double dlog(double t) const noexcept;

private:
  double t0_ = 0.0;
  double dt_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace hslab
