#include "hslab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "hslab/errors.hpp"

namespace hslab {

namespace {

QuadResult kronrod_unit(const std::function<double(double)>& f, double a, double b,
                        unsigned max_depth, double rel_tol) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadResult out;
  if (a == b) return out;
  // Boost's error floor scales with the interval length; work on [0, 1].
  const double len = b - a;
  auto unit = [&](double u) { return f(a + len * u) * len; };
  out.value = Rule::integrate(unit, 0.0, 1.0, max_depth, rel_tol, &out.error, &out.l1);
  out.l1 = std::abs(out.l1);
  const double scale = std::max(out.l1, std::abs(out.value));
  // Boost stops either on tolerance or on depth; only the latter is a failure.
  const double floor = std::max(10.0 * rel_tol, 1e-10);
  out.converged = std::isfinite(out.value) && !(out.error > floor * scale && out.error > 1e-300);
  return out;
}

}  // namespace

QuadResult integrate_panel(const std::function<double(double)>& f, double a, double b,
                           unsigned max_depth, double rel_tol) {
  return kronrod_unit(f, a, b, max_depth, rel_tol);
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opts) {
  QuadResult out = kronrod_unit(f, a, b, opts.max_depth, opts.rel_tol);
  if (!out.converged) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: estimate "
       << out.value << " +/- " << out.error;
    throw QuadratureError(os.str(), out.value, out.error);
  }
  return out;
}

QuadResult integrate_log_adaptive(const std::function<double(double)>& f, double r_lo,
                                  double r_hi, const QuadOptions& opts) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo)) throw DomainError("integrate_log_adaptive: need 0 < lo <= hi");
  auto g = [&f](double t) {
    const double r = std::exp(t);
    return f(r) * r;
  };
  return integrate_adaptive(g, std::log(r_lo), std::log(r_hi), opts);
}

}  // namespace hslab
