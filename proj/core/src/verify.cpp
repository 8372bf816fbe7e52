#include "hslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"

namespace hslab {

EquationCoefficients EquationCoefficients::from_problem(const EuclideanProblem& pb, double p,
                                                        double inner_cutoff) {
  EquationCoefficients c;
  c.n = pb.params().n;
  c.s = pb.params().s;
  c.gamma = pb.params().gamma;
  c.p = p;
  c.h = [&pb](double r) { return pb.h(r); };
  c.r_dh = [&pb](double r) { return pb.r_dh(r); };
  c.b = [&pb](double r) { return pb.b(r); };
  c.r_db = [&pb](double r) { return pb.r_db(r); };
  c.problem = &pb;
  c.inner_cutoff = inner_cutoff;
  return c;
}

EquationCoefficients EquationCoefficients::limit(int n, double s, double gamma, double b0) {
  EquationCoefficients c;
  c.n = n;
  c.s = s;
  c.gamma = gamma;
  c.h = [](double) { return 0.0; };
  c.r_dh = [](double) { return 0.0; };
  c.b = [b0](double) { return b0; };
  c.r_db = [](double) { return 0.0; };
  return c;
}

PohozaevBreakdown pohozaev_residual(const SolutionProfile& prof, const EquationCoefficients& c,
                                    double a, double b) {
  const auto& g = prof.v.grid();
  if (!(a > 0.0 && a < b)) throw DomainError("pohozaev_residual: need 0 < a < b");
  if (!g.contains(a)) throw ExtrapolationError("pohozaev_residual: inner radius outside the grid", a);
  if (!g.contains(b)) throw ExtrapolationError("pohozaev_residual: outer radius outside the grid", b);
  a = std::max(a, g.inner());
  b = std::min(b, g.outer());
  const int n = c.n;
  const double q = c.q();
  const double omega = sphere_area(n);
  const double span = std::log(b / a);
  const auto cells = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(span / g.log_step() - 1e-9)));
  const double dt = span / static_cast<double>(cells);

  std::vector<double> yh(cells + 1), ydh(cells + 1), yq(cells + 1), ydb(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    const double r = j == cells ? b : a * std::exp(dt * static_cast<double>(j));
    const double v = prof.v.at(r);
    const double v2 = v * v, vq = std::pow(std::abs(v), q);
    const double rn = std::pow(r, n), rns = std::pow(r, n - c.s);
    yh[j] = c.h(r) * v2 * rn;
    ydh[j] = c.r_dh(r) * v2 * rn;
    yq[j] = c.b(r) * vq * rns;
    ydb[j] = c.r_db(r) * vq * rns;
  }

  PohozaevBreakdown out;
  out.h_term = -omega * simpson(yh, dt).value;
  out.dh_term = -0.5 * omega * simpson(ydh, dt).value;
  out.defect_term = -c.p * (n - 2.0) / (2.0 * q) * omega * simpson(yq, dt).value;
  out.db_term = -omega / q * simpson(ydb, dt).value;
  out.nonlinear_mass = omega * simpson(yq, dt).value;

  auto flux = [&](double r, double v, double dv) {
    const double bulk = 0.5 * dv * dv - 0.5 * c.gamma * v * v / (r * r) - 0.5 * c.h(r) * v * v -
                        c.b(r) * std::pow(std::abs(v), q) / (q * std::pow(r, c.s));
    return omega * std::pow(r, n - 1) * (r * bulk - (r * dv + 0.5 * (n - 2.0) * v) * dv);
  };
  if (c.problem != nullptr && c.inner_cutoff > 0.0 && a < 10.0 * c.inner_cutoff) {
    const auto jet = frobenius_init(*c.problem, prof.K0, a, c.p);
    out.flux_inner = flux(a, jet.v, jet.dv);
    out.jet_at_inner = true;
  } else {
    out.flux_inner = flux(a, prof.v.at(a), prof.dv.at(a));
  }
  out.flux_outer = flux(b, prof.v.at(b), prof.dv.at(b));

  const double vol = out.h_term + out.dh_term + out.defect_term + out.db_term + out.gamma_offset +
                     out.s_offset;
  out.total = vol - (out.flux_outer - out.flux_inner);
  out.max_term = std::max({std::abs(out.h_term), std::abs(out.dh_term), std::abs(out.defect_term),
                           std::abs(out.db_term), std::abs(out.flux_inner), std::abs(out.flux_outer),
                           std::abs(out.nonlinear_mass)});
  out.relative = out.max_term > 0.0 ? std::abs(out.total) / out.max_term : 0.0;
  return out;
}

namespace {

GreenTable table_for(const RadialGrid& g, int n) {
  return GreenTable(n, g.inner(), g.outer(), 400.0);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

InequalityMargin hardy_check(const RadialFunction& u, int n) {
  const auto table = table_for(u.grid(), n);
  InequalityMargin m;
  m.lhs = 0.25 * (n - 2.0) * (n - 2.0) *
          hyperbolic_integral([&](double r) { return table.V(r, 2.0); }, u, 2.0, n).value;
  m.rhs = hyperbolic_dirichlet_energy(u, n, 2.0).value;
  m.margin = m.rhs - m.lhs;
  m.relative = m.rhs > 0.0 ? m.margin / m.rhs : 0.0;
  return m;
}

HardySobolevQuotient hardy_sobolev_check(const RadialFunction& u, int n, double s, double gamma) {
  const auto table = table_for(u.grid(), n);
  const double q = critical_exponent(n, s);
  HardySobolevQuotient hs;
  const double grad = hyperbolic_dirichlet_energy(u, n, 2.0).value;
  const double hardy = hyperbolic_integral([&](double r) { return table.V(r, 2.0); }, u, 2.0, n).value;
  const double nl = hyperbolic_integral([&](double r) { return table.V(r, q); }, u, q, n).value;
  if (!(nl > 0.0)) throw DomainError("hardy_sobolev_check: function vanishes");
  hs.numerator = grad - gamma * hardy;
  hs.denominator = std::pow(nl, 2.0 / q);
  hs.quotient = hs.numerator / hs.denominator;
  return hs;
}

RadialFunction random_bump(std::uint64_t seed, std::uint64_t index, const RadialGrid& grid,
                           double r_lo, double r_hi) {
  if (!(r_lo < r_hi)) throw DomainError("random_bump: need r_lo < r_hi");
  std::mt19937_64 rng(splitmix(seed ^ splitmix(index + 1)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t_lo = std::log(r_lo), t_hi = std::log(r_hi);
  const int count = 1 + static_cast<int>(rng() % 3);
  struct Bump {
    double c, w, a;
  };
  std::vector<Bump> bumps;
  for (int k = 0; k < count; ++k) {
    const double w = (0.15 + 0.35 * unit(rng)) * (t_hi - t_lo);
    const double c = t_lo + w + (t_hi - t_lo - 2.0 * w) * unit(rng);
    const double a = (0.2 + 0.8 * unit(rng)) * (unit(rng) < 0.8 ? 1.0 : -1.0);
    bumps.push_back({c, w, a});
  }
  return RadialFunction::sample(grid, [&](double r) {
    const double t = std::log(r);
    double v = 0.0;
    for (const auto& b : bumps) {
      const double x = (t - b.c) / b.w;
      if (std::abs(x) < 1.0) v += b.a * std::exp(1.0 - 1.0 / (1.0 - x * x));
    }
    return v;
  });
}

namespace {

constexpr double kBumpLo = 1e-2;
constexpr double kBumpHi = 0.6;

RadialGrid bump_grid() { return RadialGrid::with_density(0.5 * kBumpLo, 0.7, 400.0); }

}  // namespace

SweepSummary hardy_sweep(int n, std::uint64_t seed, std::size_t count, double tol) {
  SweepSummary sum;
  sum.seed = seed;
  sum.samples = count;
  sum.worst = std::numeric_limits<double>::infinity();
  sum.best = -std::numeric_limits<double>::infinity();
  const auto grid = bump_grid();
  for (std::size_t i = 0; i < count; ++i) {
    const auto u = random_bump(seed, i, grid, kBumpLo, kBumpHi);
    const auto m = hardy_check(u, n);
    sum.worst = std::min(sum.worst, m.relative);
    sum.best = std::max(sum.best, m.relative);
    if (m.relative < -tol) ++sum.failures;
  }
  return sum;
}

SweepSummary hardy_sobolev_sweep(int n, double s, double gamma, std::uint64_t seed,
                                 std::size_t count) {
  SweepSummary sum;
  sum.seed = seed;
  sum.samples = count;
  sum.worst = std::numeric_limits<double>::infinity();
  sum.best = -std::numeric_limits<double>::infinity();
  const auto grid = bump_grid();
  for (std::size_t i = 0; i < count; ++i) {
    const auto u = random_bump(seed, i, grid, kBumpLo, kBumpHi);
    const auto hs = hardy_sobolev_check(u, n, s, gamma);
    sum.worst = std::min(sum.worst, hs.quotient);
    sum.best = std::max(sum.best, hs.quotient);
    if (!(hs.quotient > 0.0)) ++sum.failures;
  }
  return sum;
}

namespace {

// Least squares y = c0 + c1 x + sum_j c_{j+2} z_j via normal equations with
// Gaussian elimination; returns coefficients and the standard error of c1.
std::pair<std::vector<double>, double> least_squares(const std::vector<std::vector<double>>& cols,
                                                     const std::vector<double>& y) {
  const std::size_t m = cols.size(), N = y.size();
  std::vector<std::vector<double>> A(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < N; ++k) A[i][j] += cols[i][k] * cols[j][k];
    for (std::size_t k = 0; k < N; ++k) A[i][m] += cols[i][k] * y[k];
  }
  // inverse of the normal matrix for the covariance
  std::vector<std::vector<double>> M(m, std::vector<double>(2 * m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) M[i][j] = A[i][j];
    M[i][m + i] = 1.0;
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    std::swap(M[c], M[piv]);
    const double d = M[c][c];
    if (d == 0.0) throw std::runtime_error("least squares: singular design");
    for (auto& x : M[c]) x /= d;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = M[r][c];
      for (std::size_t k = 0; k < 2 * m; ++k) M[r][k] -= f * M[c][k];
    }
  }
  std::vector<double> coef(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) coef[i] += M[i][m + j] * A[j][m];
  double ss = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    double fit = 0.0;
    for (std::size_t i = 0; i < m; ++i) fit += coef[i] * cols[i][k];
    ss += (y[k] - fit) * (y[k] - fit);
  }
  const double dof = N > m ? static_cast<double>(N - m) : 1.0;
  const double se = std::sqrt(ss / dof * std::max(0.0, M[1][m + 1]));
  return {coef, se};
}

ExponentFit fit_against(const RadialFunction& v, double r1, double r2,
                        const std::function<double(double)>& abscissa,
                        const std::vector<double>& extra) {
  if (!(r1 < r2)) throw DomainError("asymptotic_exponent: need r1 < r2");
  const auto& g = v.grid();
  if (!g.contains(r1) || !g.contains(r2))
    throw ExtrapolationError("asymptotic_exponent: window outside the grid", g.contains(r1) ? r2 : r1);
  ExponentFit fit;
  std::vector<double> x, y, rr;
  int sign = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    if (r < r1 * (1 - 1e-12) || r > r2 * (1 + 1e-12)) continue;
    const double val = v[i];
    const int sg = (val > 0) - (val < 0);
    if (sg == 0 || (sign != 0 && sg != sign)) return fit;
    sign = sg;
    x.push_back(abscissa(r));
    y.push_back(std::log(std::abs(val)));
    rr.push_back(r);
  }
  if (x.size() < extra.size() + 3) return fit;
  std::vector<std::vector<double>> cols;
  cols.emplace_back(x.size(), 1.0);
  cols.push_back(x);
  for (double e : extra) {
    std::vector<double> z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = std::pow(rr[k] / r2, e);
    cols.push_back(std::move(z));
  }
  const auto [coef, se] = least_squares(cols, y);
  fit.intercept = coef[0];
  fit.slope = coef[1];
  fit.std_error = se;
  fit.points = x.size();
  fit.corrections.assign(coef.begin() + 2, coef.end());
  fit.defined = true;
  return fit;
}

}  // namespace

ExponentFit asymptotic_exponent(const RadialFunction& v, double r1, double r2,
                                const std::vector<double>& correction_exponents) {
  return fit_against(v, r1, r2, [](double r) { return std::log(r); }, correction_exponents);
}

ExponentFit asymptotic_exponent_green(const RadialFunction& u, int n, double r1, double r2) {
  const GreenTable table(n, r1, r2, 400.0);
  return fit_against(u, r1, r2, [&](double r) { return std::log(table.G(r)); }, {});
}

WindowStability window_stability(const RadialFunction& v, double r1, double decades,
                                 double shift_decades,
                                 const std::vector<double>& correction_exponents) {
  WindowStability ws;
  const double w = std::pow(10.0, decades), s = std::pow(10.0, shift_decades);
  ws.base = asymptotic_exponent(v, r1, r1 * w, correction_exponents);
  ws.shifted = asymptotic_exponent(v, r1 * s, r1 * s * w, correction_exponents);
  ws.shift = std::abs(ws.base.slope - ws.shifted.slope);
  ws.stable = ws.base.defined && ws.shifted.defined && ws.shift < 0.5 * ws.base.std_error;
  return ws;
}

std::vector<double> origin_correction_exponents(const EuclideanProblem& problem, double p) {
  const auto& par = problem.params();
  const double q = critical_exponent(par.n, par.s) - p;
  const double sigma = 2.0 - par.s - problem.exponents().beta_minus * (q - 2.0);
  const double theta = problem.leading_behaviour().first;
  std::vector<double> out;
  for (double e : {sigma, 2.0 - theta, 2.0 * sigma, 3.0 * sigma}) {
    if (!(e > 0.0)) continue;
    if (std::none_of(out.begin(), out.end(), [e](double x) { return std::abs(x - e) < 1e-9; }))
      out.push_back(e);
  }
  return out;
}

EnergyTable energy_levels(const std::vector<SolutionProfile>& profiles) {
  EnergyTable t;
  for (const auto& p : profiles) t.rows.push_back({p.node_count, p.p_defect, p.energy});
  std::sort(t.rows.begin(), t.rows.end(), [](const auto& a, const auto& b) {
    return a.node_count != b.node_count ? a.node_count < b.node_count : a.p > b.p;
  });
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    t.all_positive = t.all_positive && t.rows[i].energy > 0.0;
    for (std::size_t j = 0; j < i; ++j)
      if (t.rows[j].p == t.rows[i].p && t.rows[j].node_count < t.rows[i].node_count)
        t.monotone_in_nodes = t.monotone_in_nodes && t.rows[i].energy > t.rows[j].energy;
  }
  return t;
}

void VerificationReport::add(std::string name, double value, double tolerance, bool pass,
                             std::string detail) {
  checks.push_back({std::move(name), value, tolerance, pass, std::move(detail)});
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["provenance"] = provenance;
  j["all_pass"] = all_pass();
  auto arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"value", c.value},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass},
                   {"detail", c.detail}});
  j["checks"] = std::move(arr);
  return j;
}

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "name,value,tolerance,pass,detail\n";
  for (const auto& c : checks) {
    std::string d = c.detail;
    std::replace(d.begin(), d.end(), ',', ';');
    os << c.name << ',' << c.value << ',' << c.tolerance << ',' << (c.pass ? 1 : 0) << ',' << d << '\n';
  }
  return os.str();
}

}  // namespace hslab
