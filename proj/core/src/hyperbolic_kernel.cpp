#include "hslab/hyperbolic_kernel.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hslab/errors.hpp"

namespace hslab {

namespace {

void require_radius(double r, const char* who) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << who << ": radius " << r << " outside (0, 1)";
    throw DomainError(os.str());
  }
}

void require_dimension(int n) {
  if (n < 3) throw DomainError("dimension must be >= 3");
}

// int_{r_lo}^{r_hi} f dr with the substitution r = e^t
double green_cell(double r_lo, double r_hi, int n) {
  auto g = [n](double t) {
    const double r = std::exp(t);
    return green_density(r, n) * r;
  };
  return integrate_panel(g, std::log(r_lo), std::log(r_hi), 8, 1e-15).value;
}

}  // namespace

double sphere_area(int n) {
  require_dimension(n);
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

HyperbolicMeasureContext HyperbolicMeasureContext::make(int n) {
  return HyperbolicMeasureContext{n, sphere_area(n)};
}

double green_density(double r, int n) {
  require_radius(r, "green_density");
  require_dimension(n);
  return std::pow((1.0 - r) * (1.0 + r), n - 2) / std::pow(r, n - 1);
}

QuadResult green_G_quad(double r, int n, const QuadOptions& opts) {
  require_radius(r, "green_G");
  require_dimension(n);
  // log substitution where f is a power law, plain r near the boundary where
  // e^t would lose the digits of 1 - r
  auto f = [n](double x) { return green_density(x, n); };
  // f(1 - x) with x = 1 - r kept exact
  auto f_edge = [n](double x) {
    return std::pow(x * (2.0 - x), n - 2) / std::pow(1.0 - x, n - 1);
  };
  const double mid = std::max(r, 0.5);
  QuadResult outer = integrate_adaptive(f_edge, 0.0, 1.0 - mid, opts);
  if (r < mid) {
    const QuadResult inner = integrate_log_adaptive(f, r, mid, opts);
    outer.value += inner.value;
    outer.error += inner.error;
    outer.l1 += inner.l1;
  }
  return outer;
}

double green_G(double r, int n) { return green_G_quad(r, n).value; }

double green_G_inverse(double g, int n) {
  require_dimension(n);
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("green_G_inverse: g must be positive");
  const double log_g = std::log(g);
  auto F = [&](double t) { return std::log(green_G(std::exp(t), n)) - log_g; };

  // G ~ r^{2-n} / (n-2) near the origin
  double t_guess = -std::log((n - 2) * g) / (n - 2);
  t_guess = std::min(t_guess, -1e-3);
  const double t_cap = std::log1p(-1e-6);
  double lo = t_guess - 1.0, hi = std::min(t_guess + 1.0, t_cap);
  for (int k = 0; F(lo) < 0.0; ++k) {
    lo -= 2.0 * (k + 1);
    if (k > 60) throw DomainError("green_G_inverse: no lower bracket");
  }
  if (F(t_cap) > 0.0) throw DomainError("green_G_inverse: g too small to invert");
  for (int k = 0; F(hi) > 0.0; ++k) hi = 0.5 * (hi + t_cap);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      F, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return std::exp(0.5 * (a + b));
}

double weight_V_p(double r, int n, double p) {
  require_radius(r, "weight_V_p");
  if (p < 1.0) throw DomainError("weight_V_p: exponent must be >= 1");
  const double f = green_density(r, n);
  const double om = (1.0 - r) * (1.0 + r);
  const double G = green_G(r, n);
  return f * f * om * om / (4.0 * (n - 2) * (n - 2) * std::pow(G, 0.5 * (p + 2.0)));
}

double ball_volume_factor(double r, int n) {
  require_radius(r, "ball_volume_factor");
  return std::pow(2.0 / ((1.0 - r) * (1.0 + r)), n);
}

GreenTable::GreenTable(int n, double inner, double outer, double nodes_per_decade) : n_(n) {
  require_dimension(n);
  require_radius(inner, "GreenTable");
  require_radius(outer, "GreenTable");
  if (!(outer > inner)) throw DomainError("GreenTable: need inner < outer");
  const double t0 = std::log(inner), t1 = std::log(outer);
  const auto cells = static_cast<std::size_t>(
      std::max(4.0, std::ceil((t1 - t0) / std::numbers::ln10 * nodes_per_decade)));
  const double dt = (t1 - t0) / static_cast<double>(cells);
  std::vector<double> G(cells + 1), slope(cells + 1);
  G[cells] = green_G(outer, n);
  double r_hi = outer;
  for (std::size_t i = cells; i-- > 0;) {
    const double r_lo = std::exp(t0 + dt * static_cast<double>(i));
    G[i] = G[i + 1] + green_cell(r_lo, r_hi, n);
    r_hi = r_lo;
  }
  for (std::size_t i = 0; i <= cells; ++i) {
    const double r = i == cells ? outer : std::exp(t0 + dt * static_cast<double>(i));
    slope[i] = -r * green_density(r, n) / G[i];
    G[i] = std::log(G[i]);
  }
  log_g_ = LogHermiteTable::from_samples(t0, dt, std::move(G), std::move(slope));
}

bool GreenTable::covers(double r) const noexcept {
  return !log_g_.empty() && r >= log_g_.inner() * (1 - 1e-14) && r <= log_g_.outer() * (1 + 1e-14);
}

double GreenTable::G(double r) const {
  if (!covers(r)) return green_G(r, n_);
  return std::exp(log_g_(r));
}

double GreenTable::inverse(double g) const {
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("GreenTable::inverse: g must be positive");
  const double lg = std::log(g);
  const double t_lo = std::log(log_g_.inner()), t_hi = std::log(log_g_.outer());
  if (log_g_.empty() || lg > log_g_.eval_log(t_lo) || lg < log_g_.eval_log(t_hi))
    return green_G_inverse(g, n_);
  auto F = [&](double t) { return log_g_.eval_log(t) - lg; };
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      F, t_lo, t_hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return std::exp(0.5 * (a + b));
}

double GreenTable::dlogG(double r) const {
  if (!covers(r)) return -r * green_density(r, n_) / green_G(r, n_);
  return log_g_.dlog(std::log(r));
}

double GreenTable::V(double r, double p) const {
  require_radius(r, "GreenTable::V");
  const double f = green_density(r, n_);
  const double om = (1.0 - r) * (1.0 + r);
  return f * f * om * om / (4.0 * (n_ - 2) * (n_ - 2) * std::pow(G(r), 0.5 * (p + 2.0)));
}

double GreenTable::dlogV(double r, double p) const {
  // 2 r f'/f - 4 r^2/(1-r^2) - (p+2)/2 dlogG
  const double om = (1.0 - r) * (1.0 + r);
  const double r_dlogf = -2.0 * r * r * (n_ - 2) / om - (n_ - 1);
  return 2.0 * r_dlogf - 4.0 * r * r / om - 0.5 * (p + 2.0) * dlogG(r);
}

RadialFunction hyperbolic_scaling(const RadialFunction& u, double lambda, int n,
                                  const std::optional<RadialGrid>& target) {
  if (!(lambda > 0.0)) throw DomainError("hyperbolic_scaling: lambda must be positive");
  const RadialGrid& grid = target ? *target : u.grid();
  grid.require_unit_ball();
  u.grid().require_unit_ball();
  std::vector<double> out(grid.size());
  const double amp = 1.0 / std::sqrt(lambda);
  if (lambda == 1.0) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = amp * u.at(grid[i]);
    return RadialFunction(grid, std::move(out), u.interpolation_order());
  }
  const GreenTable table(n, std::min(grid.inner(), u.grid().inner()),
                         std::max(grid.outer(), u.grid().outer()), 400.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double pulled = table.inverse(lambda * table.G(grid[i]));
    const auto& src = u.grid();
    if (pulled < src.inner() && pulled > src.inner() * (1.0 - 1e-9)) pulled = src.inner();
    if (pulled > src.outer() && pulled < src.outer() * (1.0 + 1e-9)) pulled = src.outer();
    out[i] = amp * u.at(pulled);
  }
  return RadialFunction(grid, std::move(out), u.interpolation_order());
}

RadialGrid scaled_support_grid(const RadialGrid& grid, double lambda, int n, double refine) {
  if (!(lambda > 0.0)) throw DomainError("scaled_support_grid: lambda must be positive");
  grid.require_unit_ball();
  const double shrink = 1e-10 * grid.log_step();
  const double lo = green_G_inverse(green_G(grid.inner(), n) / lambda, n) * std::exp(shrink);
  const double hi = green_G_inverse(green_G(grid.outer(), n) / lambda, n) * std::exp(-shrink);
  if (!(refine >= 1.0)) throw DomainError("scaled_support_grid: refine must be >= 1");
  const auto nodes = static_cast<std::size_t>(std::ceil(refine * static_cast<double>(grid.size() - 1))) + 1;
  return RadialGrid::log_spaced(lo, hi, nodes);
}

QuadResult hyperbolic_integral(const std::function<double(double)>& w, const RadialFunction& u,
                               double q, int n) {
  const RadialGrid& grid = u.grid();
  grid.require_unit_ball();
  const double omega = sphere_area(n);
  auto integrand = [&](double t) {
    const double r = std::exp(t);
    const double val = u.at(std::clamp(r, grid.inner(), grid.outer()));
    if (val == 0.0) return 0.0;
    return w(r) * std::pow(std::abs(val), q) * std::pow(r, n) * ball_volume_factor(r, n);
  };
  QuadResult total;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto cell = integrate_panel(integrand, grid.log_node(i), grid.log_node(i + 1), 4, 1e-13);
    total.value += cell.value;
    total.error += cell.error;
    total.l1 += cell.l1;
    total.converged = total.converged && cell.converged;
  }
  total.value *= omega;
  total.error *= omega;
  total.l1 *= omega;
  return total;
}

QuadResult hyperbolic_dirichlet_energy(const RadialFunction& u, int n, double q) {
  const RadialFunction du = u.derivative();
  auto w = [q](double r) { return std::pow(0.5 * ((1.0 - r) * (1.0 + r)), q); };
  return hyperbolic_integral(w, du, q, n);
}

}  // namespace hslab
