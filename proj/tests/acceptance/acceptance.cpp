// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hslab/blowup_lab.hpp"
#include "hslab/conformal_bridge.hpp"
#include "hslab/continuation.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/limit_equation.hpp"
#include "hslab/profile_io.hpp"
#include "hslab/radial_solver.hpp"
#include "hslab/spectral_constants.hpp"
#include "hslab/variational.hpp"
#include "hslab/verify.hpp"
#include "oracles.hpp"

#ifdef HSLAB_ACCEPTANCE_WITH_CLI
#include "commands.hpp"
#include "config.hpp"
#endif

using namespace hslab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const EuclideanProblem& reference() {
  static const EuclideanProblem pb(ProblemParams{}, 0.5);
  return pb;
}

SolutionProfile ground_state(double npd = 200.0) {
  ShootingOptions o;
  o.nodes_per_decade = npd;
  return solve_dirichlet_shooting(reference(), 0.2, 0, o);
}

const LimitBubble& reference_bubble() {
  static const LimitBubble b = solve_limit_equation(5, 1.0, -2.0, b_at_origin(5, 1.0));
  return b;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome kernel_exactness() {
  double worst_g = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = std::pow(10.0, -4.0 + 3.99 * i / 19.0);
    worst_g = std::max(worst_g, rel(green_G(r, 3), oracle::green3(r)));
  }
  double worst_v = 0.0;
  for (int n : {3, 5, 7}) worst_v = std::max(worst_v, std::abs(weight_V_p(1e-4, n, 2.0) * 4e-8 - 1.0));
  return {worst_g <= 1e-10 && worst_v <= 1e-3,
          "G rel err " + fmt("%.2e", worst_g) + ", |4r^2 V_2 - 1| " + fmt("%.2e", worst_v)};
}

Outcome scaling_invariance() {
  const int n = 5;
  const double q = critical_exponent(n, 1.0);
  const auto g = RadialGrid::with_density(5e-3, 0.7, 800.0);
  const GreenTable table(n, 1e-3, 0.99);
  auto w2 = [&](double r) { return table.V(r, 2.0); };
  auto wq = [&](double r) { return table.V(r, q); };
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto u = random_bump(20240101, k, g, 1e-2, 0.6);
    const double e0 = hyperbolic_dirichlet_energy(u, n).value;
    const double a0 = hyperbolic_integral(w2, u, 2.0, n).value;
    const double b0 = hyperbolic_integral(wq, u, q, n).value;
    for (double lambda : {0.5, 2.0, 5.0}) {
      const auto ul = hyperbolic_scaling(u, lambda, n, scaled_support_grid(g, lambda, n));
      worst = std::max({worst, rel(hyperbolic_dirichlet_energy(ul, n).value, e0),
                        rel(hyperbolic_integral(w2, ul, 2.0, n).value, a0),
                        rel(hyperbolic_integral(wq, ul, q, n).value, b0)});
    }
  }
  return {worst <= 1e-6, "worst relative drift " + fmt("%.2e", worst) + " over 20 bumps x 3 lambdas"};
}

Outcome conformal_bridge() {
  double worst = 0.0;
  for (int n : {5, 6, 7})
    for (double s : {0.5, 1.0, 1.5}) {
      const double closed = std::pow(n - 2.0, (2.0 - s) / (n - 2.0)) / std::pow(2.0, 2.0 - s);
      worst = std::max(worst, std::abs(b_weight(1e-7, n, s) - closed));
    }
  auto diff = [](double npd) {
    const auto g = RadialGrid::with_density(1e-2, 0.6, npd);
    const auto u = RadialFunction::sample(g, [](double r) { return std::exp(-4 * r * r) * (1 + r); });
    return residual_equivalence_check(u, ProblemParams{}).relative_difference;
  };
  const double d1 = diff(50.0), d2 = diff(100.0), d3 = diff(200.0);
  const double order = std::log2(std::min(d1 / d2, d2 / d3));
  return {worst <= 1e-6 && order >= 3.0,
          "b(0+) err " + fmt("%.2e", worst) + ", equivalence order " + fmt("%.2f", order)};
}

Outcome indicial() {
  double worst_res = 0.0;
  for (int n : {3, 5, 7})
    for (double gm : {-2.0, 0.0, 0.2}) {
      const auto [bm, bp] = beta_pm(n, gm);
      for (double beta : {bm, bp})
        for (double r : {1e-3, 0.3, 2.0}) {
          const double v = std::pow(r, -beta), dv = -beta * v / r, d2v = beta * (beta + 1) * v / (r * r);
          const double scale = std::abs(d2v) + std::abs((n - 1) * dv / r) + std::abs(gm * v / (r * r));
          worst_res = std::max(worst_res, std::abs(-d2v - (n - 1) * dv / r - gm * v / (r * r)) / scale);
        }
    }
  const auto prof = ground_state();
  const auto corr = origin_correction_exponents(reference(), 0.2);
  const double r1 = 2.0 * prof.v.grid().inner();
  const auto fit = asymptotic_exponent(prof.v, r1, 10.0 * r1, corr);
  const double bm = reference().exponents().beta_minus;
  const double err = std::abs(fit.slope + bm) / std::abs(bm);
  const auto ws = window_stability(prof.v, r1, 1.0, 0.5, corr);
  return {worst_res < 1e-10 && prof.converged && fit.defined && err <= 0.02 && ws.stable,
          "ODE residual " + fmt("%.1e", worst_res) + ", slope " + fmt("%.7f", fit.slope) + " vs " +
              fmt("%.7f", -bm) + " (rel " + fmt("%.1e", err) + "), window shift " + fmt("%.1e", ws.shift) +
              " < " + fmt("%.1e", 0.5 * ws.base.std_error)};
}

Outcome cross_validation() {
  const auto sh = ground_state();
  const auto va = solve_variational(reference(), 0.2);
  const double dsup = rel(va.profile.v.sup_norm(), sh.v.sup_norm());
  const double den = rel(va.profile.energy, sh.energy);
  const double q = critical_exponent(5, 1.0) - 0.2;
  const double factor = std::pow(16.0, -1.0 / (q - 2.0));
  const auto scaled = solve_dirichlet_shooting(reference().with_b_scale(16.0), 0.2, 0);
  const double dscale = std::max(rel(scaled.K0, factor * sh.K0), rel(scaled.v.sup_norm(), factor * sh.v.sup_norm()));
  return {va.converged && dsup <= 0.02 && den <= 0.01 && dscale <= 1e-6,
          "sup diff " + fmt("%.1e", dsup) + ", energy diff " + fmt("%.1e", den) + ", b->16b factor err " +
              fmt("%.1e", dscale)};
}

Outcome pohozaev() {
  std::vector<double> res;
  for (double npd : {50.0, 100.0, 200.0}) {
    const auto prof = ground_state(npd);
    const auto c = EquationCoefficients::from_problem(reference(), 0.2, prof.v.grid().inner());
    res.push_back(pohozaev_residual(prof, c, prof.v.grid().inner(), 0.5).relative);
  }
  const auto& b = reference_bubble();
  const auto bc = EquationCoefficients::limit(5, 1.0, -2.0, b.b0);
  // both fluxes vanish far from the peak, so the annulus straddles it
  const double bub = pohozaev_residual(b.profile, bc, 0.25 * b.peak_radius, 4.0 * b.peak_radius).relative;
  const double drop = std::min(res[0] / res[1], res[1] / res[2]);
  return {res[2] <= 1e-4 && bub <= 1e-4 && drop >= 8.0,
          "ground state " + fmt("%.2e", res[2]) + ", bubble " + fmt("%.2e", bub) + ", min drop per halving " +
              fmt("%.1f", drop) + "x"};
}

double bubble_bound(const LimitBubble& b, double lo, double hi, double* at_lo = nullptr, double* at_hi = nullptr) {
  const auto [bm, bp] = beta_pm(5, -2.0);
  double c = 0.0;
  const auto& v = b.profile.v;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v.grid()[i];
    if (r < lo || r > hi) continue;
    const double w = std::abs(v[i]) * (std::pow(r, bm) + std::pow(r, bp));
    c = std::max(c, w);
  }
  if (at_lo) *at_lo = std::abs(v.at(lo)) * (std::pow(lo, bm) + std::pow(lo, bp));
  if (at_hi) *at_hi = std::abs(v.at(hi)) * (std::pow(hi, bm) + std::pow(hi, bp));
  return c;
}

Outcome limit_bubble() {
  const auto& b = reference_bubble();
  const auto [bm, bp] = beta_pm(5, -2.0);
  const auto& g = b.profile.v.grid();
  const auto lo = asymptotic_exponent(b.profile.v, 10.0 * g.inner(), 100.0 * g.inner());
  const auto hi = asymptotic_exponent(b.profile.v, 0.01 * g.outer(), 0.1 * g.outer());
  const double elo = std::abs(lo.slope + bm) / bm, ehi = std::abs(hi.slope + bp) / bp;
  const double P = b.peak_radius;
  double w_lo = 0.0, w_hi = 0.0;
  const double C = bubble_bound(b, 1e-3 * P, 1e3 * P, &w_lo, &w_hi);
  const bool plateau = rel(w_lo, b.K_minus) <= 0.02 && rel(w_hi, b.K_plus) <= 0.02;
  return {b.converged && elo <= 0.02 && ehi <= 0.02 && std::isfinite(C) && plateau,
          "slopes " + fmt("%.5f", lo.slope) + " / " + fmt("%.5f", hi.slope) + ", C = " + fmt("%.2f", C) +
              " over [P/1e3, 1e3 P], end values match K-/K+ to " +
              fmt("%.1e", std::max(rel(w_lo, b.K_minus), rel(w_hi, b.K_plus)))};
}

Outcome compactness() {
  const ProblemParams prm;
  const auto regime = admissibility(prm);
  const auto run = continuation_to_critical(reference(),
                                            ContinuationSchedule{{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.0}}, 0);
  if (run.failure_index) return {false, "continuation failed: " + run.failure_message};
  const auto rep = compactness_verdict(run, prm);
  double wmax = 0.0, wmin = 1e300;
  for (const auto& s : run.steps) {
    wmax = std::max(wmax, s.weighted_sup);
    wmin = std::min(wmin, s.weighted_sup);
  }
  return {regime.all() && rep.verdict == Verdict::Compact && rep.consistent && rep.decay.geometric,
          "verdict " + to_string(rep.verdict) + ", tau-sup growth " + fmt("%.3f", rep.sup_growth) +
              ", weighted sup in [" + fmt("%.2f", wmin) + ", " + fmt("%.2f", wmax) + "], decay rate " +
              fmt("%.3f", rep.decay.fitted_rate)};
}

Outcome blowup_fixtures() {
  const auto bub = solve_limit_equation(5, 1.0, -2.0, 1.0);
  const auto grid = RadialGrid::with_density(1e-7, 10.0, 200.0);
  const std::vector<double> one{1e-3}, two{1e-4, 1e-2};
  const auto s1 = detect_scales(planted_bubbles(bub, one, 0.0, grid), 0.0);
  const auto u2 = planted_bubbles(bub, two, 0.0, grid);
  const auto s2 = detect_scales(u2, 0.0);
  double det = 1.0;
  if (s1.size() == 1 && s2.size() == 2)
    det = std::max({rel(s1[0].mu, 1e-3), rel(s2[0].mu, 1e-4), rel(s2[1].mu, 1e-2)});
  const double own = bubble_bound(bub, bub.profile.v.grid().inner(), bub.profile.v.grid().outer());
  const auto env = envelope_check(u2, two, 0.0, 2.0 * own);

  const ProblemParams prm;
  const double L = 0.37;
  std::vector<RateSample> samples;
  for (double mu : {1e-2, 5e-3, 2.5e-3}) {
    const double x = std::pow(mu, 2.0 - prm.theta);
    samples.push_back({L * x * (1.0 + 3.0 * x), mu});
  }
  const std::vector<BubbleIntegral> ints{bubble_integrals(bub.profile, prm.theta)};
  const auto rate = rate_check(samples, prm, 1.0, ints);
  const double rerr = rel(rate.measured_limit, L);
  return {det <= 0.1 && env.pass && rerr <= 0.02 && rate.sign_contradiction,
          "scales found " + std::to_string(s1.size()) + "+" + std::to_string(s2.size()) + " (worst err " +
              fmt("%.1e", det) + "), envelope C " + fmt("%.1f", env.c_fit) + " <= " + fmt("%.1f", 2.0 * own) +
              ", rate err " + fmt("%.1e", rerr) + ", sign contradiction " + (rate.sign_contradiction ? "yes" : "no")};
}

Outcome hardy() {
  const auto h = hardy_sweep(5, 20240101, 100, 1e-8);
  const auto a = hardy_sobolev_sweep(5, 1.0, -2.0, 20240101, 200);
  const auto b = hardy_sobolev_sweep(5, 1.0, -2.0, 20240102, 200);
  const double drift = std::abs(a.worst - b.worst) / std::max(a.worst, b.worst);
  return {h.failures == 0 && a.failures == 0 && a.worst > 0.0 && drift <= 0.05,
          "Hardy worst margin " + fmt("%.3f", h.worst) + " (" + std::to_string(h.failures) +
              " failures), HS infimum " + fmt("%.3f", a.worst) + ", reseed drift " + fmt("%.2e", drift)};
}

Outcome determinism() {
#ifdef HSLAB_ACCEPTANCE_WITH_CLI
  auto cfg = cli::parse_config(nlohmann::json::parse(
      R"({"params": {"n": 5, "s": 1.0, "gamma": -2.0, "lambda": 10.0},
          "sweep": {"gamma": [-2.0, -1.0], "p": [0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.0]}})"));
  const auto a = cli::run_sweep(cfg, 1);
  const auto b = cli::run_sweep(cfg, 1);
  const auto c = cli::run_sweep(cfg, 4);
  const bool same = a.rows_csv == b.rows_csv && a.verdicts_csv == b.verdicts_csv &&
                    a.rows_csv == c.rows_csv && a.verdicts_csv == c.verdicts_csv;
  return {same && a.succeeded == a.rows,
          std::to_string(a.rows) + "-point sweep, reruns with 1, 1 and 4 workers " +
              (same ? "byte-identical" : "differ")};
#else
  const auto a = profile_csv(ground_state());
  const auto b = profile_csv(ground_state());
  return {a == b, std::string("reference solve rerun ") + (a == b ? "byte-identical" : "differs") +
                      " (CLI not built, sweep check skipped)"};
#endif
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const double inf = 1e300;
  const std::vector<Criterion> criteria{
      {1, "kernel exactness", 1.0, kernel_exactness},
      {2, "scaling invariance", 30.0, scaling_invariance},
      {3, "conformal bridge", 60.0, conformal_bridge},
      {4, "indicial correctness", inf, indicial},
      {5, "solver cross-validation", inf, cross_validation},
      {6, "Pohozaev identity", inf, pohozaev},
      {7, "limit bubble", inf, limit_bubble},
      {8, "compactness witness", 600.0, compactness},
      {9, "blow-up machinery on fixtures", inf, blowup_fixtures},
      {10, "Hardy and Hardy-Sobolev", inf, hardy},
      {11, "determinism", inf, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %2d %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
