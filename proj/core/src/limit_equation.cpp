#include "hslab/limit_equation.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/ode.hpp"

namespace hslab {

LimitBubble solve_limit_equation(int n, double s, double gamma, double b0,
                                 const LimitOptions& opts) {
  if (!(b0 > 0.0)) throw DomainError("limit equation: b0 must be positive");
  if (!(s >= 0.0 && s < 2.0)) throw AdmissibilityError("limit equation: s must lie in [0, 2)");
  const auto e = exponent_set(n, s, gamma);
  const double q = e.two_star_s;
  const double bm = e.beta_minus, bp = e.beta_plus, nu = e.nu;
  const double k = 2.0 - s - bm * (q - 2.0);  // = -(2 - s - bp (q - 2))

  // K_- = 1: w = r^{beta_-} u = 1 + B r^k + ..., transition near (|B|^{-1})^{1/k}
  const double B = -b0 / (k * (k + 2.0 * nu));
  const double t_m = -std::log(std::abs(B)) / k;
  const double half = opts.decades_each_side * std::numbers::ln10;
  const auto per_side = static_cast<std::size_t>(std::ceil(opts.decades_each_side * opts.nodes_per_decade));
  const double dt = half / static_cast<double>(per_side);
  const std::size_t N = 2 * per_side + 1;
  const double t_a = t_m - half;

  OdeOptions o;
  o.rel_tol = opts.rel_tol;
  o.abs_tol = 1e-300;

  std::vector<double> fwd_times(per_side + 1);
  for (std::size_t i = 0; i <= per_side; ++i) fwd_times[i] = t_a + dt * static_cast<double>(i);
  fwd_times.back() = t_m;
  auto fwd_rhs = [&](const State2& y, State2& dy, double t) {
    dy[0] = y[1];
    dy[1] = -2.0 * nu * y[1] - b0 * std::exp(k * t) * std::pow(std::abs(y[0]), q - 2.0) * y[0];
  };
  const double ra_k = std::exp(k * t_a);
  const auto fwd = integrate_sampled(fwd_rhs, {1.0 + B * ra_k, k * B * ra_k}, fwd_times, o);
  if (fwd.diverged) throw std::runtime_error("limit equation: forward integration failed");
  const State2 ym = fwd.y.back();
  const double ell_minus = ym[1] / ym[0] - bm;

  std::vector<double> bwd_times(per_side + 1);
  for (std::size_t i = 0; i <= per_side; ++i) bwd_times[i] = t_m + half - dt * static_cast<double>(i);
  bwd_times.back() = t_m;
  auto bwd_rhs = [&](const State2& y, State2& dy, double t) {
    dy[0] = y[1];
    dy[1] = 2.0 * nu * y[1] - b0 * std::exp(-k * t) * std::pow(std::abs(y[0]), q - 2.0) * y[0];
  };
  auto backward = [&](double Kp) {
    const double rb = std::exp(-k * bwd_times.front());
    const double Bp = -b0 * std::pow(Kp, q - 1.0) / (k * k + 2.0 * nu * k);
    auto traj = integrate_sampled(bwd_rhs, {Kp + Bp * rb, -k * Bp * rb}, bwd_times, o);
    if (traj.diverged) throw std::runtime_error("limit equation: backward integration failed");
    return traj;
  };
  auto mismatch = [&](double log_kp) {
    const auto tr = backward(std::exp(log_kp));
    const State2 y = tr.y.back();
    return (y[1] / y[0] - bp) - ell_minus;
  };

  // exact bubbles give K_+ = mu^{2 nu} with mu the transition scale
  const double guess = 2.0 * nu * t_m;
  double lo = guess - 2.0, hi = guess + 2.0;
  for (int i = 0; mismatch(lo) * mismatch(hi) > 0.0; ++i) {
    lo -= 2.0;
    hi += 2.0;
    if (i > 20) throw std::runtime_error("limit equation: connection not bracketed");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      mismatch, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double Kp = std::exp(0.5 * (a + b));
  const auto bwd = backward(Kp);

  // stitch on the common uniform-t grid: forward nodes 0..per_side, backward the rest
  std::vector<double> t(N), u(N), du(N);
  for (std::size_t i = 0; i < N; ++i) t[i] = t_a + dt * static_cast<double>(i);
  for (std::size_t i = 0; i <= per_side; ++i) {
    const double r = std::exp(t[i]);
    const auto& y = fwd.y[i];
    u[i] = std::pow(r, -bm) * y[0];
    du[i] = std::pow(r, -bm - 1.0) * (y[1] - bm * y[0]);
  }
  for (std::size_t j = 0; j < per_side; ++j) {
    const std::size_t i = N - 1 - j;
    const double r = std::exp(t[i]);
    const auto& y = bwd.y[j];
    u[i] = std::pow(r, -bp) * y[0];
    du[i] = std::pow(r, -bp - 1.0) * (y[1] - bp * y[0]);
  }
  const double um_back = std::pow(std::exp(t_m), -bp) * bwd.y.back()[0];
  const double um_fwd = u[per_side];

  // normalise at the maximiser of r^{(n-2)/2} u
  const double half_n = 0.5 * (n - 2.0);
  const auto raw_grid = RadialGrid::log_spaced(std::exp(t.front()), std::exp(t.back()), N);
  const RadialFunction raw(raw_grid, u);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (std::pow(raw_grid[i], half_n) * u[i] > std::pow(raw_grid[imax], half_n) * u[imax]) imax = i;
  auto neg_weighted = [&](double tt) {
    const double r = std::exp(tt);
    return -std::pow(r, half_n) * raw.at(r);
  };
  std::uintmax_t it2 = 100;
  const auto lo_i = imax == 0 ? 0 : imax - 1, hi_i = std::min(imax + 1, N - 1);
  const auto [t_star, neg_val] =
      boost::math::tools::brent_find_minima(neg_weighted, raw_grid.log_node(lo_i), raw_grid.log_node(hi_i), 50, it2);
  const double r_star = std::exp(t_star);
  const double u_star = -neg_val / std::pow(r_star, half_n);
  const double scale = std::pow(u_star, -2.0 / (n - 2.0));  // u~(x) = scale^{(n-2)/2} u(scale x)

  const auto grid = raw_grid.dilated(1.0 / scale);
  const double amp = std::pow(scale, half_n);
  std::vector<double> uv(N), duv(N);
  for (std::size_t i = 0; i < N; ++i) {
    uv[i] = amp * u[i];
    duv[i] = amp * scale * du[i];
  }

  LimitBubble out;
  out.b0 = b0;
  out.peak_radius = r_star / scale;
  out.K_minus = std::pow(scale, nu);
  out.K_plus = Kp * std::pow(scale, -nu);
  out.value_mismatch = std::abs(um_back - um_fwd) / um_fwd;

  SolutionProfile& prof = out.profile;
  prof.v = RadialFunction(grid, std::move(uv));
  prof.dv = RadialFunction(grid, std::move(duv));
  prof.K0 = out.K_minus;
  prof.node_count = prof.v.sign_changes();
  prof.params = ProblemParams{n, s, gamma, 0.0, 0.0, 0.0, 0.0};
  prof.radius = std::numeric_limits<double>::infinity();
  prof.method = "limit";

  // energy and equation residual
  std::vector<double> y(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = grid[i], v = prof.v[i], d = prof.dv[i];
    y[i] = (0.5 * d * d - 0.5 * gamma * v * v / (r * r) - b0 * std::pow(std::abs(v), q) / (q * std::pow(r, s))) *
           std::pow(r, n);
  }
  prof.energy = sphere_area(n) * simpson(y, grid.log_step()).value;
  const auto ddt = uniform_derivative(prof.dv.values(), grid.log_step());
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < N; ++i) {
    const double r = grid[i], v = prof.v[i];
    const double terms[] = {ddt[i] / r, (n - 1) * prof.dv[i] / r, gamma * v / (r * r),
                            b0 * std::pow(std::abs(v), q - 2.0) * v / std::pow(r, s)};
    double sum = 0.0, sc = 0.0;
    for (double tm : terms) {
      sum += tm;
      sc = std::max(sc, std::abs(tm));
    }
    worst = std::max(worst, std::abs(sum) / sc);
  }
  prof.residual_norm = worst;
  out.converged = out.value_mismatch < 1e-8 && prof.node_count == 0;
  prof.converged = out.converged;
  return out;
}

double limit_bubble_quotient(int n, double s, double gamma, const LimitOptions& opts) {
  const auto bub = solve_limit_equation(n, s, gamma, 1.0, opts);
  const auto& v = bub.profile.v;
  const auto& dv = bub.profile.dv;
  const auto& g = v.grid();
  const double q = critical_exponent(n, s);
  std::vector<double> num(g.size()), den(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    num[i] = (dv[i] * dv[i] - gamma * v[i] * v[i] / (r * r)) * std::pow(r, n);
    den[i] = std::pow(std::abs(v[i]), q) * std::pow(r, n - s);
  }
  const double omega = sphere_area(n);
  const double N = omega * simpson(num, g.log_step()).value;
  const double D = omega * simpson(den, g.log_step()).value;
  return N / std::pow(D, 2.0 / q);
}

}  // namespace hslab
