#include "hslab/spectral_constants.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/limit_equation.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

void ProblemParams::validate() const {
  std::ostringstream os;
  if (n < 3) os << "n must be >= 3; ";
  if (!(s > 0.0 && s < 2.0)) os << "s must lie in (0, 2); ";
  if (!(theta >= 0.0 && theta < 2.0)) os << "theta must lie in [0, 2); ";
  if (n >= 3 && s > 0.0 && s < 2.0) {
    const double top = critical_exponent(n, s) - 2.0;
    if (!(p_defect >= 0.0 && p_defect < top)) os << "p_defect must lie in [0, 2*(s) - 2); ";
  }
  if (!std::isfinite(gamma) || !std::isfinite(lambda) || !std::isfinite(c))
    os << "gamma, lambda and c must be finite; ";
  const auto msg = os.str();
  if (!msg.empty()) throw AdmissibilityError(msg.substr(0, msg.size() - 2));
}

double critical_exponent(int n, double s) {
  if (n < 3) throw DomainError("critical_exponent: n must be >= 3");
  return 2.0 * (n - s) / (n - 2);
}

double sobolev_exponent(int n) { return critical_exponent(n, 0.0); }

std::pair<double, double> beta_pm(int n, double gamma) {
  if (n < 3) throw DomainError("beta_pm: n must be >= 3");
  const double half = 0.5 * (n - 2);
  const double disc = half * half - gamma;
  if (!(disc > 0.0)) {
    std::ostringstream os;
    os << "gamma = " << gamma << " is not below the Hardy constant (n-2)^2/4 = " << half * half;
    throw AdmissibilityError(os.str());
  }
  const double nu = std::sqrt(disc);
  // small root via Vieta
  const double plus = half + nu;
  return {gamma / plus, plus};
}

double alpha_minus(int n, double gamma) {
  if (n < 3) throw DomainError("alpha_minus: n must be >= 3");
  const double rad = 0.25 - gamma / ((n - 2.0) * (n - 2.0));
  if (rad < 0.0) throw AdmissibilityError("alpha_minus: gamma exceeds (n-2)^2/4");
  return 0.5 - std::sqrt(rad);
}

ExponentSet exponent_set(int n, double s, double gamma) {
  ExponentSet e;
  std::tie(e.beta_minus, e.beta_plus) = beta_pm(n, gamma);
  e.nu = 0.5 * (e.beta_plus - e.beta_minus);
  e.alpha_minus = alpha_minus(n, gamma);
  e.two_star_s = critical_exponent(n, s);
  e.tau_lo = e.beta_minus;
  e.tau_hi = 0.5 * (n - 2);
  return e;
}

RegimeReport admissibility(const ProblemParams& p) {
  RegimeReport r;
  const double hardy = 0.25 * (p.n - 2.0) * (p.n - 2.0);
  r.hardy_subcritical = p.gamma < hardy;
  r.multiplicity_regime = p.gamma < hardy - (2.0 - p.theta) * (2.0 - p.theta);
  if (p.n >= 5) {
    r.lambda_threshold = (p.n - 2.0) / (p.n - 4.0) * (p.n * (p.n - 4.0) / 4.0 - p.gamma);
    r.lambda_threshold_met = p.lambda > r.lambda_threshold;
  } else {
    r.lambda_threshold = std::numeric_limits<double>::quiet_NaN();
  }
  if (p.n >= 3 && p.s >= 0.0 && p.s < 2.0)
    r.theta_cap_met = p.theta <= 2.0 - 2.0 / critical_exponent(p.n, p.s);
  r.c_positive = p.c > 0.0;
  return r;
}

double trial_family_quotient(int n, double s, double gamma, double a) {
  if (!(a > 0.0)) throw DomainError("trial_family_quotient: shape must be positive");
  const auto e = exponent_set(n, s, gamma);
  const double q = e.two_star_s;
  const double bm = e.beta_minus, nu = e.nu;
  const double den_rate = 2.0 * nu * (n - s) / (n - 2.0);
  const double T = 40.0 / (2.0 * nu) + 40.0 / a;

  // log w = -(2 nu / a) log(1 + e^{a t}), evaluated without overflow
  auto log_w = [&](double t) {
    const double x = a * t;
    const double sp = x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    return -(2.0 * nu / a) * sp;
  };
  auto num = [&](double t) {
    const double x = a * t;
    const double frac = x > 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    const double slope = bm + 2.0 * nu * frac;
    return std::exp(2.0 * log_w(t) + 2.0 * nu * t) * (slope * slope - gamma);
  };
  auto den = [&](double t) { return std::exp(q * log_w(t) + den_rate * t); };
  QuadOptions o;
  o.rel_tol = 1e-12;
  const double N = integrate_adaptive(num, -T, T, o).value;
  const double D = integrate_adaptive(den, -T, T, o).value;
  const double omega = sphere_area(n);
  return omega * N / std::pow(omega * D, 2.0 / q);
}

BestConstantEstimate best_constant_estimate(int n, double s, double gamma,
                                            const BestConstantOptions& opts) {
  BestConstantEstimate out;
  auto f = [&](double log_a) { return trial_family_quotient(n, s, gamma, std::exp(log_a)); };
  std::uintmax_t iters = 200;
  const double lo = std::log(opts.a_lo), hi = std::log(opts.a_hi);
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, 40, iters);
  out.trial_shape = std::exp(x);
  out.trial_value = fx;
  out.value = fx;
  const bool interior = x > lo + 1e-6 && x < hi - 1e-6 && iters < 200;
  bool agree = true;
  if (opts.include_bubble) {
    out.bubble_value = limit_bubble_quotient(n, s, gamma);
    out.value = std::min(out.value, out.bubble_value);
    agree = std::abs(out.bubble_value - out.trial_value) <= 1e-4 * out.trial_value;
  }
  out.converged = interior && agree && std::isfinite(out.value) && out.value > 0.0;
  return out;
}

}  // namespace hslab
