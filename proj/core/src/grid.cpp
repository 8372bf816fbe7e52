#include "hslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hslab/errors.hpp"

namespace hslab {

RadialGrid::RadialGrid(double t0, double dt, std::size_t n) : t0_(t0), dt_(dt), r_(n) {
  for (std::size_t i = 0; i < n; ++i) r_[i] = std::exp(t0 + dt * static_cast<double>(i));
}

RadialGrid RadialGrid::log_spaced(double inner, double outer, std::size_t nodes) {
  if (!(inner > 0.0) || !(outer > inner) || !std::isfinite(outer))
    throw DomainError("RadialGrid: need 0 < inner < outer");
  if (nodes < 5) throw std::invalid_argument("RadialGrid: need at least 5 nodes");
  const double t0 = std::log(inner);
  const double t1 = std::log(outer);
  RadialGrid g(t0, (t1 - t0) / static_cast<double>(nodes - 1), nodes);
  g.r_.front() = inner;
  g.r_.back() = outer;
  return g;
}

RadialGrid RadialGrid::with_density(double inner, double outer, double nodes_per_decade) {
  if (!(nodes_per_decade > 0.0)) throw std::invalid_argument("RadialGrid: density must be positive");
  const double decades = std::log10(outer / inner);
  const auto n = static_cast<std::size_t>(std::ceil(decades * nodes_per_decade)) + 1;
  return log_spaced(inner, outer, std::max<std::size_t>(n, 5));
}

double RadialGrid::nodes_per_decade() const noexcept { return std::log(10.0) / dt_; }

void RadialGrid::require_unit_ball() const {
  if (r_.empty() || !(r_.front() > 0.0) || !(r_.back() < 1.0)) {
    std::ostringstream os;
    os << "grid [" << (r_.empty() ? 0.0 : r_.front()) << ", " << (r_.empty() ? 0.0 : r_.back())
       << "] is not inside the unit ball";
    throw DomainError(os.str());
  }
}

bool RadialGrid::contains(double r) const noexcept {
  if (r_.empty()) return false;
  // one ulp of slack at the ends: nodes are produced by exp() of t values
  const double lo = r_.front() * (1.0 - 4e-16);
  const double hi = r_.back() * (1.0 + 4e-16);
  return r >= lo && r <= hi;
}

RadialGrid RadialGrid::dilated(double factor) const {
  if (!(factor > 0.0)) throw DomainError("RadialGrid::dilated: factor must be positive");
  RadialGrid g(t0_ + std::log(factor), dt_, r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) g.r_[i] = r_[i] * factor;
  return g;
}

RadialGrid RadialGrid::refined() const { return log_spaced(inner(), outer(), 2 * size() - 1); }

RadialGrid RadialGrid::window(double a, double b) const {
  if (!(a < b)) throw DomainError("RadialGrid::window: need a < b");
  const double fa = (std::log(a) - t0_) / dt_;
  const double fb = (std::log(b) - t0_) / dt_;
  const auto last = static_cast<long>(r_.size()) - 1;
  const long ia = std::clamp(static_cast<long>(std::floor(fa + 1e-9)), 0L, last);
  const long ib = std::clamp(static_cast<long>(std::ceil(fb - 1e-9)), 0L, last);
  if (ib - ia < 4) throw ExtrapolationError("RadialGrid::window: fewer than 5 nodes in window", a);
  RadialGrid g(log_node(static_cast<std::size_t>(ia)), dt_, static_cast<std::size_t>(ib - ia + 1));
  std::copy(r_.begin() + ia, r_.begin() + ib + 1, g.r_.begin());
  return g;
}

RadialFunction::RadialFunction(RadialGrid grid, std::vector<double> values, int interpolation_order)
    : grid_(std::move(grid)), values_(std::move(values)), order_(interpolation_order) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("RadialFunction: values.size() != grid.size()");
  if (order_ < 1) throw std::invalid_argument("RadialFunction: interpolation order must be >= 1");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("RadialFunction: non-finite sample");
}

double RadialFunction::at(double r) const {
  if (!grid_.contains(r)) {
    std::ostringstream os;
    os << "radius " << r << " outside sampled support [" << grid_.inner() << ", " << grid_.outer()
       << "]";
    throw ExtrapolationError(os.str(), r);
  }
  const double x = (std::log(r) - grid_.log_inner()) / grid_.log_step();
  return lagrange_uniform(values_, x, order_);
}

RadialFunction RadialFunction::log_derivative() const {
  return RadialFunction(grid_, uniform_derivative(values_, grid_.log_step()), order_);
}

RadialFunction RadialFunction::derivative() const {
  auto d = uniform_derivative(values_, grid_.log_step());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] /= grid_[i];
  return RadialFunction(grid_, std::move(d), order_);
}

double RadialFunction::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

int RadialFunction::sign_changes() const noexcept {
  int changes = 0;
  int last = 0;
  for (double v : values_) {
    const int sgn = (v > 0.0) - (v < 0.0);
    if (sgn == 0) continue;
    if (last != 0 && sgn != last) ++changes;
    last = sgn;
  }
  return changes;
}

std::vector<double> uniform_derivative(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 5) throw std::invalid_argument("uniform_derivative: need at least 5 samples");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]);
  d[1] = c * (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = c * (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]);
  const std::size_t m = n - 1;
  d[m] = c * (25 * y[m] - 48 * y[m - 1] + 36 * y[m - 2] - 16 * y[m - 3] + 3 * y[m - 4]);
  d[m - 1] = c * (3 * y[m] + 10 * y[m - 1] - 18 * y[m - 2] + 6 * y[m - 3] - y[m - 4]);
  return d;
}

std::vector<double> uniform_second_derivative(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 6) throw std::invalid_argument("uniform_second_derivative: need at least 6 samples");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h * h);
  d[0] = c * (45 * y[0] - 154 * y[1] + 214 * y[2] - 156 * y[3] + 61 * y[4] - 10 * y[5]);
  d[1] = c * (10 * y[0] - 15 * y[1] - 4 * y[2] + 14 * y[3] - 6 * y[4] + y[5]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = c * (-y[i - 2] + 16 * y[i - 1] - 30 * y[i] + 16 * y[i + 1] - y[i + 2]);
  const std::size_t m = n - 1;
  d[m] = c * (45 * y[m] - 154 * y[m - 1] + 214 * y[m - 2] - 156 * y[m - 3] + 61 * y[m - 4] -
              10 * y[m - 5]);
  d[m - 1] = c * (10 * y[m] - 15 * y[m - 1] - 4 * y[m - 2] + 14 * y[m - 3] - 6 * y[m - 4] +
                  y[m - 5]);
  return d;
}

namespace {

double simpson_value(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  if (n == 3) return h / 3.0 * (y[0] + 4 * y[1] + y[2]);
  const std::size_t intervals = n - 1;
  std::size_t simpson_end = intervals;  // last node index covered by Simpson
  double tail = 0.0;
  if (intervals % 2 == 1) {
    simpson_end = intervals - 3;
    const std::size_t k = simpson_end;
    tail = 3.0 * h / 8.0 * (y[k] + 3 * y[k + 1] + 3 * y[k + 2] + y[k + 3]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) s += y[i] + 4 * y[i + 1] + y[i + 2];
  return s * h / 3.0 + tail;
}

}  // namespace

SampledIntegral simpson(std::span<const double> y, double h) {
  SampledIntegral out;
  out.value = simpson_value(y, h);
  const std::size_t intervals = y.empty() ? 0 : y.size() - 1;
  if (intervals >= 8 && intervals % 2 == 0) {
    std::vector<double> coarse;
    coarse.reserve(y.size() / 2 + 1);
    for (std::size_t i = 0; i < y.size(); i += 2) coarse.push_back(y[i]);
    out.error = std::abs(out.value - simpson_value(coarse, 2 * h)) / 15.0;
  } else if (intervals >= 9) {
    out.error = std::abs(out.value - (simpson_value(y.first(y.size() - 1), h) +
                                      0.5 * h * (y[y.size() - 2] + y.back()))) /
                15.0;
  }
  return out;
}

SampledIntegral integrate_dr(const RadialGrid& grid, std::span<const double> integrand) {
  if (integrand.size() != grid.size())
    throw std::invalid_argument("integrate_dr: integrand size mismatch");
  std::vector<double> g(integrand.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = integrand[i] * grid[i];
  return simpson(g, grid.log_step());
}

double lagrange_uniform(std::span<const double> y, double x, int order) {
  const auto n = static_cast<long>(y.size());
  const int k = std::min<int>(order, static_cast<int>(n - 1));
  long start = static_cast<long>(std::floor(x)) - (k - 1) / 2;
  start = std::clamp(start, 0L, n - 1 - k);
  const double xi = x - static_cast<double>(start);
  // exact node hit
  const double nearest = std::round(xi);
  if (std::abs(xi - nearest) < 1e-13 && nearest >= 0 && nearest <= k)
    return y[static_cast<std::size_t>(start + static_cast<long>(nearest))];
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    double w = 1.0;
    for (int m = 0; m <= k; ++m)
      if (m != j) w *= (xi - m) / static_cast<double>(j - m);
    sum += w * y[static_cast<std::size_t>(start + j)];
  }
  return sum;
}

LogHermiteTable::LogHermiteTable(
    double inner, double outer, std::size_t nodes,
    const std::function<std::pair<double, double>(double)>& value_and_dlogr) {
  if (!(inner > 0.0) || !(outer > inner) || nodes < 2)
    throw DomainError("LogHermiteTable: need 0 < inner < outer and >= 2 nodes");
  t0_ = std::log(inner);
  dt_ = (std::log(outer) - t0_) / static_cast<double>(nodes - 1);
  values_.resize(nodes);
  slopes_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double r = i + 1 == nodes ? outer : std::exp(t0_ + dt_ * static_cast<double>(i));
    const auto [v, d] = value_and_dlogr(r);
    values_[i] = v;
    slopes_[i] = d;
  }
}

LogHermiteTable LogHermiteTable::from_samples(double log_inner, double log_step,
                                              std::vector<double> values,
                                              std::vector<double> slopes) {
  if (values.size() < 2 || values.size() != slopes.size() || !(log_step > 0.0))
    throw DomainError("LogHermiteTable: inconsistent samples");
  LogHermiteTable t;
  t.t0_ = log_inner;
  t.dt_ = log_step;
  t.values_ = std::move(values);
  t.slopes_ = std::move(slopes);
  return t;
}

double LogHermiteTable::inner() const noexcept { return std::exp(t0_); }
double LogHermiteTable::outer() const noexcept {
  return std::exp(t0_ + dt_ * static_cast<double>(values_.size() - 1));
}

double LogHermiteTable::eval_log(double t) const noexcept {
  const double x = (t - t0_) / dt_;
  if (x <= 0.0) return values_.front();
  const auto last = values_.size() - 1;
  if (x >= static_cast<double>(last)) return values_.back();
  const auto i = static_cast<std::size_t>(x);
  const double u = x - static_cast<double>(i);
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return h00 * values_[i] + h10 * dt_ * slopes_[i] + h01 * values_[i + 1] +
         h11 * dt_ * slopes_[i + 1];
}

double LogHermiteTable::dlog(double t) const noexcept {
  const double x = (t - t0_) / dt_;
  if (x <= 0.0) return slopes_.front();
  const auto last = values_.size() - 1;
  if (x >= static_cast<double>(last)) return slopes_.back();
  const auto i = static_cast<std::size_t>(x);
  const double u = x - static_cast<double>(i);
  const double d00 = 6 * u * u - 6 * u;
  const double d10 = 3 * u * u - 4 * u + 1;
  const double d01 = -d00;
  const double d11 = 3 * u * u - 2 * u;
  return (d00 * values_[i] + d01 * values_[i + 1]) / dt_ + d10 * slopes_[i] + d11 * slopes_[i + 1];
}

}  // namespace hslab
