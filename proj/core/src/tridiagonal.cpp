#include "hslab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hslab {

std::vector<double> SymTridiag::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double SymTridiag::quadratic_form(std::span<const double> x) const {
  double s = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    s += diag[i] * x[i] * x[i];
    if (i + 1 < n) s += 2.0 * off[i] * x[i] * x[i + 1];
  }
  return s;
}

SymTridiag SymTridiag::shifted(double sigma, const SymTridiag& other) const {
  SymTridiag c(size());
  for (std::size_t i = 0; i < size(); ++i) c.diag[i] = diag[i] - sigma * other.diag[i];
  for (std::size_t i = 0; i < off.size(); ++i) c.off[i] = off[i] - sigma * other.off[i];
  return c;
}

std::vector<double> solve_tridiagonal(const SymTridiag& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> c(n), d(n);
  double denom = a.diag[0];
  if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c[0] = n > 1 ? a.off[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = a.diag[i] - a.off[i - 1] * c[i - 1];
    if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[i] = i + 1 < n ? a.off[i] / denom : 0.0;
    d[i] = (rhs[i] - a.off[i - 1] * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

std::size_t negative_inertia(const SymTridiag& a) {
  std::size_t count = 0;
  double pivot = a.diag[0];
  const double tiny = 1e-300;
  for (std::size_t i = 0;; ++i) {
    if (pivot == 0.0) pivot = -tiny;
    if (pivot < 0.0) ++count;
    if (i + 1 >= a.size()) break;
    pivot = a.diag[i + 1] - a.off[i] * a.off[i] / pivot;
  }
  return count;
}

EigenpairResult smallest_generalized_eigenpair(const SymTridiag& a, const SymTridiag& b,
                                               const EigenOptions& opts) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("smallest_generalized_eigenpair: bad sizes");
  auto below = [&](double sigma) { return negative_inertia(a.shifted(sigma, b)); };

  // bracket the smallest eigenvalue
  double lo = -1.0, hi = 1.0;
  for (int k = 0; below(lo) > 0; ++k) {
    lo *= 2.0;
    if (k > 2000) throw std::runtime_error("eigen bracket: no lower bound");
  }
  for (int k = 0; below(hi) == 0; ++k) {
    hi = hi > 0 ? hi * 2.0 : 1.0;
    if (k > 2000) throw std::runtime_error("eigen bracket: no upper bound");
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid) == 0) lo = mid; else hi = mid;
  }

  EigenpairResult out;
  const double scale = std::max(1.0, std::abs(lo));
  const SymTridiag shifted = a.shifted(lo - 1e-9 * scale, b);
  std::vector<double> x(a.size(), 1.0);
  double rq_prev = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    auto bx = b.apply(x);
    x = solve_tridiagonal(shifted, bx);
    const double nb = std::sqrt(b.quadratic_form(x));
    for (double& v : x) v /= nb;
    const double rq = a.quadratic_form(x);
    out.iterations = it;
    out.last_rayleigh = rq;
    if (it > 1 && std::abs(rq - rq_prev) <= opts.tol * std::max(1.0, std::abs(rq))) {
      out.converged = true;
      break;
    }
    rq_prev = rq;
  }
  out.value = out.last_rayleigh;
  const auto big = std::max_element(x.begin(), x.end(),
                                    [](double p, double q) { return std::abs(p) < std::abs(q); });
  if (*big < 0) for (double& v : x) v = -v;
  out.vector = std::move(x);
  return out;
}

}  // namespace hslab
