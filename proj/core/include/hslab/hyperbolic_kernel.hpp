#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hslab/grid.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

/// Dimension and the area of the unit sphere S^{n-1}.
struct HyperbolicMeasureContext {
  int n = 3;
  double surface_constant = 0.0;

  static HyperbolicMeasureContext make(int n);
};

/// 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// f(r) = (1 - r^2)^{n-2} / r^{n-1}.
double green_density(double r, int n);

/// G(r) = int_r^1 f, by adaptive quadrature in log r.
QuadResult green_G_quad(double r, int n, const QuadOptions& opts = {});
double green_G(double r, int n);

/// Inverse of G on (0, 1): the radius with G(r) = g.
double green_G_inverse(double g, int n);

/// V_p(r) = f^2 (1 - r^2)^2 / (4 (n-2)^2 G^{(p+2)/2}).
double weight_V_p(double r, int n, double p);

/// Volume factor (2 / (1 - r^2))^n of the ball metric.
double ball_volume_factor(double r, int n);

/// Tabulated log G(r) on [inner, outer] for repeated evaluation.
///
/// Built by summing per-cell Gauss-Kronrod integrals of f from the outer end,
/// interpolated by cubic Hermite in t = log r with exact slopes
/// d log G / dt = -r f / G. Radii outside the table fall back to quadrature.
class GreenTable {
public:
  GreenTable() = default;
  GreenTable(int n, double inner, double outer, double nodes_per_decade = 400.0);

  int dimension() const noexcept { return n_; }
  double G(double r) const;
  /// Radius with G(r) = g; falls back to green_G_inverse outside the table.
  double inverse(double g) const;
  /// d log G / d log r.
  double dlogG(double r) const;
  double V(double r, double p) const;
  /// d log V_p / d log r.
  double dlogV(double r, double p) const;

private:
  bool covers(double r) const noexcept;

  int n_ = 0;
  LogHermiteTable log_g_;
};

/// u_lambda(r) = lambda^{-1/2} u(G^{-1}(lambda G(r))), sampled on `target`
/// (default: u's own grid). Throws ExtrapolationError if a pulled-back radius
/// leaves u's support.
RadialFunction hyperbolic_scaling(const RadialFunction& u, double lambda, int n,
                                  const std::optional<RadialGrid>& target = std::nullopt);

/// Log grid whose ends are the images of `grid`'s ends under the scaling
/// (G(r') = G(r) / lambda), with `refine` times as many cells.
RadialGrid scaled_support_grid(const RadialGrid& grid, double lambda, int n, double refine = 1.0);

/// omega_{n-1} int w(r) |u(r)|^q r^{n-1} (2/(1-r^2))^n dr over u's support.
/// Integrated cell by cell in log r with a 15-point Kronrod rule, which is
/// exact in structure for the piecewise interpolant of u.
QuadResult hyperbolic_integral(const std::function<double(double)>& w, const RadialFunction& u,
                               double q, int n);

/// int |grad_B u|^q dv with |grad_B u| = (1 - r^2)/2 |u'(r)|.
QuadResult hyperbolic_dirichlet_energy(const RadialFunction& u, int n, double q = 2.0);

}  // namespace hslab
