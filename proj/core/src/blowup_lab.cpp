#include "hslab/blowup_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"

namespace hslab {

namespace {

double defect_power(double p, double two_star_s) { return 1.0 - p / (two_star_s - 2.0); }

// Vertex of the parabola through (i-1, i, i+1), as a fractional index offset.
double parabola_offset(double ym, double y0, double yp) {
  const double den = ym - 2.0 * y0 + yp;
  if (den >= 0.0) return 0.0;
  return std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
}

}  // namespace

double concentration_radius(double mu, double p, double two_star_s) {
  if (!(mu > 0.0)) throw DomainError("scale mu must be positive");
  return std::pow(mu, defect_power(p, two_star_s));
}

RescaledProfile rescale_profile(const SolutionProfile& u, double mu, double p,
                                const std::optional<RadialGrid>& target) {
  const int n = u.params.n;
  const double tss = critical_exponent(n, u.params.s);
  if (!(p >= 0.0 && p < tss - 2.0)) throw AdmissibilityError("rescale_profile: p out of range");
  const double k = concentration_radius(mu, p, tss);
  const double amp = std::pow(mu, 0.5 * (n - 2.0));

  RescaledProfile out;
  SolutionProfile& r = out.profile;
  r = u;
  if (!target) {
    const auto grid = u.v.grid().dilated(1.0 / k);
    std::vector<double> v(u.v.size()), dv(u.v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = amp * u.v[i];
      dv[i] = amp * k * u.dv[i];
    }
    r.v = RadialFunction(grid, std::move(v), u.v.interpolation_order());
    r.dv = RadialFunction(grid, std::move(dv), u.dv.interpolation_order());
  } else {
    std::vector<double> v(target->size(), 0.0), dv(target->size(), 0.0);
    for (std::size_t i = 0; i < target->size(); ++i) {
      const double x = k * (*target)[i];
      if (!u.v.grid().contains(x)) {
        out.truncated = true;
        continue;
      }
      v[i] = amp * u.v.at(x);
      dv[i] = amp * k * u.dv.at(x);
    }
    r.v = RadialFunction(*target, std::move(v), u.v.interpolation_order());
    r.dv = RadialFunction(*target, std::move(dv), u.dv.interpolation_order());
  }
  // u ~ K r^{-beta_-} maps to u~ ~ amp k^{-beta_-} K x^{-beta_-}
  r.K0 = amp * std::pow(k, -exponent_set(n, u.params.s, u.params.gamma).beta_minus) * u.K0;
  r.radius = u.radius / k;
  r.method = u.method + "+rescaled";
  return out;
}

double bubble_value(const LimitBubble& b, double rho) {
  const auto& v = b.profile.v;
  const auto& g = v.grid();
  const auto e = exponent_set(b.profile.params.n, b.profile.params.s, b.profile.params.gamma);
  if (rho < g.inner()) return v[0] * std::pow(rho / g.inner(), -e.beta_minus);
  if (rho > g.outer()) return v[v.size() - 1] * std::pow(rho / g.outer(), -e.beta_plus);
  return v.at(rho);
}

SolutionProfile planted_bubbles(const LimitBubble& b, std::span<const double> mus, double p,
                                const RadialGrid& grid) {
  const auto& prm = b.profile.params;
  const double tss = critical_exponent(prm.n, prm.s);
  std::vector<double> v(grid.size(), 0.0);
  for (double mu : mus) {
    const double k = concentration_radius(mu, p, tss);
    const double amp = std::pow(mu, -0.5 * (prm.n - 2.0));
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] += amp * bubble_value(b, grid[i] / k);
  }
  SolutionProfile out;
  const double dt = grid.log_step();
  auto dv = uniform_derivative(v, dt);
  for (std::size_t i = 0; i < grid.size(); ++i) dv[i] /= grid[i];
  out.v = RadialFunction(grid, std::move(v));
  out.dv = RadialFunction(grid, std::move(dv));
  out.params = prm;
  out.params.p_defect = p;
  out.p_defect = p;
  out.radius = grid.outer();
  out.node_count = out.v.sign_changes();
  out.method = "planted";
  out.converged = true;
  return out;
}

std::vector<DetectedScale> detect_scales(const SolutionProfile& u, double p,
                                         const DetectOptions& opts) {
  const auto& prm = u.params;
  const auto e = exponent_set(prm.n, prm.s, prm.gamma);
  const double tau = opts.tau.value_or(e.tau_mid());
  if (!(tau > e.tau_lo && tau < e.tau_hi))
    throw DomainError("detect_scales: tau must lie in (beta_-, (n-2)/2)");
  const double pw = defect_power(p, e.two_star_s);
  const double half_n = 0.5 * (prm.n - 2.0);
  const auto& g = u.v.grid();
  const std::size_t N = g.size();
  if (N < 5) return {};

  std::vector<double> ytau(N), yw(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double a = std::abs(u.v[i]);
    ytau[i] = std::pow(g[i], tau) * a;
    yw[i] = std::pow(g[i], half_n) * std::pow(a, pw);
  }
  const double global = *std::max_element(yw.begin(), yw.end());
  if (!(global > 0.0)) return {};
  const double outer_limit = opts.outer_fraction * (std::isfinite(u.radius) ? u.radius : g.outer());

  auto is_w_peak = [&](std::size_t b) {
    return yw[b] > yw[b - 1] && yw[b] >= yw[b + 1];
  };
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    if (is_w_peak(i)) peaks.push_back(i);
    if (!(ytau[i] > ytau[i - 1] && ytau[i] >= ytau[i + 1])) continue;
    // for tau < (n-2)/2 a bubble's tau-maximiser lies inside its w-peak
    std::size_t b = i;
    while (b + 1 < N - 1 && !is_w_peak(b)) ++b;
    if (is_w_peak(b)) peaks.push_back(b);
  }

  std::vector<DetectedScale> found;
  for (std::size_t b : peaks) {
    if (yw[b] < opts.noise_floor * global) continue;
    const double off = parabola_offset(yw[b - 1], yw[b], yw[b + 1]);
    const double r_star = std::exp(g.log_node(b) + off * g.log_step());
    if (r_star > outer_limit) continue;
    const double u_star = std::abs(u.v.at(std::clamp(r_star, g.inner(), g.outer())));
    DetectedScale d;
    d.radius = r_star;
    d.mu = std::pow(u_star, -1.0 / half_n);
    d.weighted_peak = std::pow(r_star, half_n) * std::pow(u_star, pw);
    found.push_back(d);
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.radius < b.radius; });
  std::vector<DetectedScale> kept;
  for (const auto& d : found) {
    if (!kept.empty() &&
        std::log10(d.radius / kept.back().radius) < opts.separation_decades) {
      if (d.weighted_peak > kept.back().weighted_peak) kept.back() = d;
      continue;
    }
    kept.push_back(d);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.mu < b.mu; });
  return kept;
}

void BubbleFamily::validate(double two_star_s) const {
  if (k.size() != mu.size() || t.size() != mu.size())
    throw std::logic_error("BubbleFamily: field sizes differ");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0) || (i > 0 && !(mu[i] > mu[i - 1])))
      throw std::logic_error("BubbleFamily: scales must be positive and increasing");
    const double kk = concentration_radius(mu[i], p, two_star_s);
    if (std::abs(k[i] - kk) > 1e-12 * kk) throw std::logic_error("BubbleFamily: k inconsistent with mu");
    if (!(t[i] > 0.0 && t[i] <= 1.0)) throw std::logic_error("BubbleFamily: t must lie in (0, 1]");
  }
}

BubbleFamily build_family(const SolutionProfile& u, double p, const DetectOptions& opts) {
  const double tss = critical_exponent(u.params.n, u.params.s);
  BubbleFamily fam;
  fam.p = p;
  for (const auto& d : detect_scales(u, p, opts)) {
    fam.mu.push_back(d.mu);
    fam.k.push_back(concentration_radius(d.mu, p, tss));
    fam.t.push_back(std::min(1.0, std::pow(d.mu, p)));
    fam.bubbles.push_back(rescale_profile(u, d.mu, p).profile);
  }
  return fam;
}

double estimate_t(std::span<const double> p, std::span<const double> mu, bool richardson) {
  if (p.empty() || p.size() != mu.size()) throw DomainError("estimate_t: need matching samples");
  const std::size_t n = p.size();
  const double last = std::pow(mu[n - 1], p[n - 1]);
  if (!richardson || n < 2 || p[n - 2] == p[n - 1]) return last;
  const double prev = std::pow(mu[n - 2], p[n - 2]);
  // linear in p through the last two samples, evaluated at p = 0
  const double slope = (last - prev) / (p[n - 1] - p[n - 2]);
  return std::clamp(last - slope * p[n - 1], std::numeric_limits<double>::min(), 1.0);
}

double origin_weighted_sup(const SolutionProfile& u) {
  const double bm = exponent_set(u.params.n, u.params.s, u.params.gamma).beta_minus;
  double m = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i)
    m = std::max(m, std::pow(u.v.grid()[i], bm) * std::abs(u.v[i]));
  return m;
}

EnvelopeReport envelope_check(const SolutionProfile& u, std::span<const double> mus, double u0_sup,
                              double c_budget) {
  const auto e = exponent_set(u.params.n, u.params.s, u.params.gamma);
  const auto& g = u.v.grid();
  EnvelopeReport rep;
  rep.c_budget = c_budget;
  const double decade0 = std::floor(std::log10(g.inner()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    double env = u0_sup * std::pow(r, -e.beta_minus);
    for (double mu : mus)
      env += std::pow(mu, e.nu) /
             (std::pow(mu, 2.0 * e.nu) * std::pow(r, e.beta_minus) + std::pow(r, e.beta_plus));
    const double a = std::abs(u.v[i]);
    double ratio = 0.0;
    if (a > 0.0) ratio = env > 0.0 ? a / env : std::numeric_limits<double>::infinity();
    if (ratio > rep.c_fit) {
      rep.c_fit = ratio;
      rep.worst_radius = r;
    }
    const auto d = static_cast<std::size_t>(std::floor(std::log10(r)) - decade0);
    while (rep.annuli.size() <= d) {
      const double lo = std::pow(10.0, decade0 + static_cast<double>(rep.annuli.size()));
      rep.annuli.push_back({lo, 10.0 * lo, 0.0});
    }
    rep.annuli[d].worst_ratio = std::max(rep.annuli[d].worst_ratio, ratio);
  }
  rep.pass = rep.c_fit <= c_budget;
  return rep;
}

BubbleIntegral bubble_integrals(const SolutionProfile& b, double theta, double t) {
  const auto& prm = b.params;
  const double q = critical_exponent(prm.n, prm.s);
  const auto& g = b.v.grid();
  std::vector<double> y2(g.size()), yq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i], v = std::abs(b.v[i]);
    y2[i] = v * v * std::pow(r, prm.n - theta);
    yq[i] = std::pow(v, q) * std::pow(r, prm.n - prm.s);
  }
  const double omega = sphere_area(prm.n);
  BubbleIntegral out;
  out.t = t;
  out.mass_theta = omega * simpson(y2, g.log_step()).value;
  out.mass_s = omega * simpson(yq, g.log_step()).value;
  return out;
}

RateReport rate_check(std::span<const RateSample> samples, const ProblemParams& prm, double b0,
                      std::span<const BubbleIntegral> bubbles, bool richardson) {
  RateReport rep;
  if (samples.empty() || bubbles.empty()) {
    rep.note = "no blow-up family: rate identity not applicable";
    return rep;
  }
  rep.applicable = true;
  const double tss = critical_exponent(prm.n, prm.s);
  const double th = prm.theta;
  bool all_nonneg = true;
  for (const auto& s : samples) {
    rep.measured.push_back(s.p / std::pow(s.mu_N, 2.0 - th));
    all_nonneg = all_nonneg && s.p >= 0.0;
  }
  rep.measured_limit = rep.measured.back();
  if (richardson && samples.size() >= 2) {
    const std::size_t n = samples.size();
    const double x1 = std::pow(samples[n - 2].mu_N, 2.0 - th);
    const double x2 = std::pow(samples[n - 1].mu_N, 2.0 - th);
    if (x1 != x2) {
      const double y1 = rep.measured[n - 2], y2 = rep.measured[n - 1];
      rep.measured_limit = y2 - (y2 - y1) / (x2 - x1) * x2;
    }
  }
  double denom = 0.0;
  for (const auto& b : bubbles) denom += b0 / std::pow(b.t, (prm.n - 2.0) / (tss - 2.0)) * b.mass_s;
  const auto& last = bubbles.back();
  rep.formula = -(0.5 * (2.0 - th)) * prm.c / std::pow(last.t, (prm.n - th) / (tss - 2.0)) *
                (4.0 * (prm.n - prm.s) / ((prm.n - 2.0) * (prm.n - 2.0))) * last.mass_theta / denom;
  rep.sign_contradiction = rep.formula < 0.0 && all_nonneg;
  if (rep.sign_contradiction)
    rep.note = "rate formula is negative while p >= 0: blow-up is incompatible with c > 0";
  return rep;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Compact: return "COMPACT";
    case Verdict::Blowup: return "BLOWUP";
    default: return "INCONCLUSIVE";
  }
}

CompactnessReport compactness_verdict(std::span<const FamilySample> fam, const ProblemParams& prm,
                                      const VerdictOptions& opts) {
  CompactnessReport rep;
  const auto regime = admissibility(prm);
  rep.theory_compact = regime.multiplicity_regime && regime.c_positive;
  if (fam.size() < 2) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = fam.empty() ? "empty family" : "single sample";
    rep.consistent = false;
    return rep;
  }
  const double first = fam.front().tau_sup;
  double maxv = first;
  for (const auto& s : fam) maxv = std::max(maxv, s.tau_sup);
  rep.sup_growth = first > 0.0 ? maxv / first : std::numeric_limits<double>::infinity();

  std::vector<double> inc;
  for (std::size_t i = 1; i < fam.size(); ++i) inc.push_back(fam[i].increment);
  rep.decay = geometric_decay(inc, opts.max_decay_rate);

  const std::size_t tail = std::min<std::size_t>(3, fam.size());
  bool tail_increasing = true;
  for (std::size_t i = fam.size() - tail + 1; i < fam.size(); ++i)
    tail_increasing = tail_increasing && fam[i].tau_sup > fam[i - 1].tau_sup;

  if (rep.sup_growth <= opts.growth_bound && rep.decay.geometric) {
    rep.verdict = Verdict::Compact;
    rep.reason = "weighted sups bounded and increments decay geometrically";
  } else if (rep.sup_growth > opts.growth_bound && tail_increasing) {
    rep.verdict = Verdict::Blowup;
    rep.reason = "tau-weighted sup grows without bound along the family";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = rep.sup_growth <= opts.growth_bound ? "increments are not geometrically decaying"
                                                     : "weighted sup large but not increasing";
  }
  rep.consistent = (rep.verdict == Verdict::Compact) == rep.theory_compact &&
                   rep.verdict != Verdict::Inconclusive;
  return rep;
}

CompactnessReport compactness_verdict(const ContinuationRun& run, const ProblemParams& prm,
                                      const VerdictOptions& opts) {
  std::vector<FamilySample> fam;
  for (const auto& s : run.steps) fam.push_back({s.p, s.tau_sup, s.weighted_sup, s.increment});
  return compactness_verdict(fam, prm, opts);
}

double bubble_count_bound(double lambda_budget, double b0, double best_constant, double tss) {
  if (!(best_constant > 0.0)) throw DomainError("best constant must be positive");
  return lambda_budget * std::pow(b0 / best_constant, tss / (tss - 2.0));
}

}  // namespace hslab
