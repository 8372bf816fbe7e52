#include "hslab/radial_solver.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/ode.hpp"

namespace hslab {

namespace {

double exponent_q(const EuclideanProblem& pb, double p) {
  const double q = pb.exponents().two_star_s - p;
  if (!(p >= 0.0) || !(q > 2.0)) throw AdmissibilityError("defect p must lie in [0, 2*(s) - 2)");
  return q;
}

double sigma_of(const EuclideanProblem& pb, double q) {
  return 2.0 - pb.params().s - pb.exponents().beta_minus * (q - 2.0);
}

struct JetCoefficients {
  double m = 2.0;   // exponent of the h correction
  double A = 0.0;   // relative coefficient of r^m
  double sigma = 0.0;
  double B = 0.0;   // absolute coefficient of r^sigma
};

JetCoefficients jet_coefficients(const EuclideanProblem& pb, double K, double p) {
  const double q = exponent_q(pb, p);
  const double nu = pb.exponents().nu;
  JetCoefficients j;
  const auto [theta, c] = pb.leading_behaviour();
  j.m = 2.0 - theta;
  if (std::isfinite(c)) j.A = -c / (j.m * (j.m + 2.0 * nu));
  j.sigma = sigma_of(pb, q);
  j.B = -pb.b0() * std::pow(std::abs(K), q - 2.0) * K / (j.sigma * (j.sigma + 2.0 * nu));
  return j;
}

}  // namespace

FrobeniusJet frobenius_init(const EuclideanProblem& pb, double K, double r0, double p) {
  if (!(r0 > 0.0 && r0 < pb.radius())) throw DomainError("frobenius_init: r0 outside (0, R)");
  const auto j = jet_coefficients(pb, K, p);
  const double bm = pb.exponents().beta_minus;
  const double rm = std::pow(r0, j.m), rs = std::pow(r0, j.sigma);
  FrobeniusJet out;
  out.w = K + K * j.A * rm + j.B * rs;
  out.wt = j.m * K * j.A * rm + j.sigma * j.B * rs;
  out.v = std::pow(r0, -bm) * out.w;
  out.dv = std::pow(r0, -bm - 1.0) * (out.wt - bm * out.w);
  return out;
}

double frobenius_jet_residual(const EuclideanProblem& pb, double K, double r0, double p) {
  const double q = exponent_q(pb, p);
  const auto j = jet_coefficients(pb, K, p);
  const double nu = pb.exponents().nu;
  const double rm = std::pow(r0, j.m), rs = std::pow(r0, j.sigma);
  const double w = K + K * j.A * rm + j.B * rs;
  const double wt = j.m * K * j.A * rm + j.sigma * j.B * rs;
  const double wtt = j.m * j.m * K * j.A * rm + j.sigma * j.sigma * j.B * rs;
  return wtt + 2.0 * nu * wt + r0 * r0 * pb.h(r0) * w +
         pb.b(r0) * rs * std::pow(std::abs(w), q - 2.0) * w;
}

ShotResult shoot(const EuclideanProblem& pb, double K, double p, const ShootingOptions& opts) {
  if (K == 0.0) throw DomainError("shoot: K must be nonzero");
  const double q = exponent_q(pb, p);
  const double R = pb.radius();
  const double r0 = opts.inner_fraction * R;
  const double nu = pb.exponents().nu;
  const double sigma = sigma_of(pb, q);

  ShotResult out;
  out.K = K;
  out.grid = RadialGrid::with_density(r0, R, opts.nodes_per_decade);
  std::vector<double> times(out.grid.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = out.grid.log_node(i);
  times.back() = std::log(R);

  auto rhs = [&](const State2& y, State2& dy, double t) {
    const double r = std::exp(t);
    dy[0] = y[1];
    dy[1] = -2.0 * nu * y[1] - r * r * pb.h(r) * y[0] -
            pb.b(r) * std::exp(sigma * t) * std::pow(std::abs(y[0]), q - 2.0) * y[0];
  };
  const auto jet = frobenius_init(pb, K, r0, p);
  OdeOptions o;
  o.rel_tol = opts.rel_tol;
  o.abs_tol = opts.abs_tol * std::abs(K);
  o.overflow_bound = opts.overflow_factor * std::abs(K);
  o.initial_step = 1e-3;
  const auto traj = integrate_sampled(rhs, {jet.w, jet.wt}, times, o);

  out.w.reserve(traj.y.size());
  out.wt.reserve(traj.y.size());
  for (const auto& y : traj.y) {
    out.w.push_back(y[0]);
    out.wt.push_back(y[1]);
  }
  out.diverged = traj.diverged;
  out.last_radius = std::exp(traj.stop_time);
  if (!out.diverged) out.boundary_w = out.w.back();
  // sign changes strictly inside: the boundary sample is excluded
  int last = 0;
  for (std::size_t i = 0; i + 1 < out.w.size(); ++i) {
    const int sg = (out.w[i] > 0) - (out.w[i] < 0);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++out.node_count;
    last = sg;
  }
  return out;
}

double dirichlet_norm_sq(const RadialFunction& dv, int n) {
  const auto& g = dv.grid();
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) y[i] = dv[i] * dv[i] * std::pow(g[i], n);
  return sphere_area(n) * simpson(y, g.log_step()).value;
}

double nonlinear_mass(const EuclideanProblem& pb, const RadialFunction& v, double p) {
  const double q = exponent_q(pb, p);
  const int n = pb.params().n;
  const auto& g = v.grid();
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    y[i] = pb.b(g[i]) * std::pow(std::abs(v[i]), q) * std::pow(g[i], n - pb.params().s);
  return sphere_area(n) * simpson(y, g.log_step()).value;
}

double profile_energy(const EuclideanProblem& pb, const RadialFunction& v,
                      const RadialFunction& dv, double p) {
  const double q = exponent_q(pb, p);
  const auto& prm = pb.params();
  const auto& g = v.grid();
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    const double dens = 0.5 * dv[i] * dv[i] - 0.5 * prm.gamma * v[i] * v[i] / (r * r) -
                        0.5 * pb.h(r) * v[i] * v[i] -
                        pb.b(r) * std::pow(std::abs(v[i]), q) / (q * std::pow(r, prm.s));
    y[i] = dens * std::pow(r, prm.n);
  }
  return sphere_area(prm.n) * simpson(y, g.log_step()).value;
}

double equation_residual(const EuclideanProblem& pb, const RadialFunction& v,
                         const RadialFunction& dv, double p) {
  const double q = exponent_q(pb, p);
  const auto& prm = pb.params();
  const auto& g = v.grid();
  const auto dvt = uniform_derivative(dv.values(), g.log_step());
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < g.size(); ++i) {
    const double r = g[i];
    const double terms[] = {dvt[i] / r, (prm.n - 1) * dv[i] / r, prm.gamma * v[i] / (r * r),
                            pb.h(r) * v[i],
                            pb.b(r) * std::pow(std::abs(v[i]), q - 2.0) * v[i] / std::pow(r, prm.s)};
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
      sum += t;
      scale = std::max(scale, std::abs(t));
    }
    if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
  }
  return worst;
}

SolutionProfile profile_from_shot(const EuclideanProblem& pb, const ShotResult& shot, double p) {
  if (shot.diverged) throw SolverFailure("cannot build a profile from a diverged shot", {});
  const double bm = pb.exponents().beta_minus;
  const auto& g = shot.grid;
  std::vector<double> v(g.size()), dv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    v[i] = std::pow(r, -bm) * shot.w[i];
    dv[i] = std::pow(r, -bm - 1.0) * (shot.wt[i] - bm * shot.w[i]);
  }
  SolutionProfile prof;
  prof.v = RadialFunction(g, std::move(v));
  prof.dv = RadialFunction(g, std::move(dv));
  prof.K0 = shot.K;
  prof.node_count = shot.node_count;
  prof.p_defect = p;
  prof.params = pb.params();
  prof.params.p_defect = p;
  prof.radius = pb.radius();
  prof.method = "shooting";
  prof.energy = profile_energy(pb, prof.v, prof.dv, p);
  prof.residual_norm = equation_residual(pb, prof.v, prof.dv, p);
  const double vmax = prof.v.sup_norm();
  prof.boundary_value = vmax > 0.0 ? std::abs(prof.v[g.size() - 1]) / vmax : 0.0;
  return prof;
}

SolutionProfile solve_dirichlet_shooting(const EuclideanProblem& pb, double p, int node_target,
                                         const ShootingOptions& opts) {
  exponent_q(pb, p);
  if (node_target < 0) throw DomainError("node target must be >= 0");
  if (p == 0.0 && !opts.K_hint)
    throw AdmissibilityError("critical solves (p = 0) need a warm-start K from continuation");

  std::vector<int> seen;
  auto shot_at = [&](double lk) { return shoot(pb, std::pow(10.0, lk), p, opts); };

  auto search = [&](double lo, double hi, double per_decade) -> std::optional<SolutionProfile> {
    const int steps = std::max(2, static_cast<int>(std::ceil((hi - lo) * per_decade)));
    double prev_lk = lo;
    ShotResult prev = shot_at(lo);
    for (int k = 1; k <= steps; ++k) {
      const double lk = lo + (hi - lo) * k / steps;
      ShotResult cur = shot_at(lk);
      if (!cur.diverged) seen.push_back(cur.node_count);
      const bool bracket = !prev.diverged && !cur.diverged &&
                           ((prev.boundary_w > 0) != (cur.boundary_w > 0));
      if (bracket) {
        auto F = [&](double x) {
          const auto s = shot_at(x);
          if (s.diverged) throw SolverFailure("shot diverged inside a bracket", seen);
          return s.boundary_w / std::pow(10.0, x);
        };
        std::uintmax_t iters = 100;
        try {
          auto [a, b] = boost::math::tools::toms748_solve(
              F, prev_lk, lk, boost::math::tools::eps_tolerance<double>(50), iters);
          const auto sa = shot_at(a), sb = shot_at(b);
          const auto& best = std::abs(sa.boundary_w) <= std::abs(sb.boundary_w) ? sa : sb;
          if (best.node_count == node_target) return profile_from_shot(pb, best, p);
        } catch (const SolverFailure&) {
        }
      }
      if (!cur.diverged && cur.node_count > node_target + 1) break;
      prev = std::move(cur);
      prev_lk = lk;
    }
    return std::nullopt;
  };

  std::optional<SolutionProfile> found;
  if (opts.K_hint) {
    const double c = std::log10(std::abs(*opts.K_hint));
    found = search(c - 1.0, c + 1.0, 4.0 * opts.scan_per_decade);
  }
  if (!found && p > 0.0) found = search(opts.log10_K_min, opts.log10_K_max, opts.scan_per_decade);
  if (!found) {
    std::ostringstream os;
    os << "no shooting bracket with " << node_target << " nodes (p = " << p << "); node counts seen:";
    for (int c : seen) os << ' ' << c;
    throw SolverFailure(os.str(), seen);
  }

  SolutionProfile prof = std::move(*found);
  if (opts.r0_self_check) {
    ShootingOptions half = opts;
    half.inner_fraction *= 0.5;
    const auto s2 = shoot(pb, prof.K0, p, half);
    const double bm = pb.exponents().beta_minus;
    const double vR = std::pow(pb.radius(), -bm) * s2.boundary_w;
    const double vR0 = prof.v[prof.v.size() - 1];
    prof.r0_shift = s2.diverged ? INFINITY : std::abs(vR - vR0) / prof.v.sup_norm();
  }
  prof.converged = prof.boundary_value <= opts.boundary_tol &&
                   (!opts.r0_self_check || prof.r0_shift <= opts.r0_shift_tol) &&
                   prof.residual_norm <= opts.residual_tol;
  return prof;
}

ComparisonPair comparison_pair(const EuclideanProblem& pb, double gamma_prime,
                               const ComparisonOptions& opts) {
  const auto& prm = pb.params();
  const double hardy = 0.25 * (prm.n - 2.0) * (prm.n - 2.0);
  if (!(prm.gamma < gamma_prime && gamma_prime < hardy))
    throw AdmissibilityError("comparison_pair: need gamma < gamma' < (n-2)^2/4");
  const auto [bm, bp] = beta_pm(prm.n, gamma_prime);
  const double nu = 0.5 * (bp - bm);
  const double R = pb.radius();
  const auto grid = RadialGrid::with_density(opts.inner_fraction * R, R, opts.nodes_per_decade);

  // W = r^{beta_+} H solves W_tt - 2 nu W_t + r^2 h W = 0; integrated inward.
  std::vector<double> times(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) times[i] = grid.log_node(grid.size() - 1 - i);
  times.front() = std::log(R);
  auto rhs = [&](const State2& y, State2& dy, double t) {
    const double r = std::exp(t);
    dy[0] = y[1];
    dy[1] = 2.0 * nu * y[1] - r * r * pb.h(r) * y[0];
  };
  OdeOptions o;
  o.abs_tol = 1e-16;
  const auto traj = integrate_sampled(rhs, {0.0, -std::pow(R, bp + 1.0)}, times, o);
  if (traj.diverged) throw std::runtime_error("comparison_pair: backward integration failed");
  const std::size_t N = grid.size();
  const double norm = traj.y.back()[0];
  std::vector<double> H(N);
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t i = N - 1 - k;
    H[i] = std::pow(grid[i], -bp) * traj.y[k][0] / norm;
  }
  H[N - 1] = 0.0;

  ComparisonPair out;
  out.gamma_prime = gamma_prime;
  out.H = RadialFunction(grid, std::move(H));
  auto eig = radial_dirichlet_eigen(
      prm.n, grid, [&](double r) { return gamma_prime / (r * r) + pb.h(r); });
  out.eigenvalue = eig.value;
  out.eigen = std::move(eig.vector);
  out.eigen_converged = eig.converged;
  return out;
}

}  // namespace hslab
