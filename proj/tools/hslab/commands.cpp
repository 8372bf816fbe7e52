#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hslab/blowup_lab.hpp"
#include "hslab/continuation.hpp"
#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/limit_equation.hpp"
#include "hslab/profile_io.hpp"
#include "hslab/variational.hpp"
#include "hslab/verify.hpp"
#include "manifest.hpp"
#include "version.hpp"
#include "worker_pool.hpp"

namespace hslab::cli {

namespace {

using nlohmann::json;

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::ostream& out_of(const CommandContext& ctx) {
  return ctx.stdout_stream != nullptr ? *ctx.stdout_stream : std::cout;
}

RunManifest make_manifest(const CommandContext& ctx, const std::string& command) {
  return RunManifest(ctx.out, command, ctx.config.to_json(), ctx.seed, ctx.workers);
}

json exponents_json(const ExponentSet& e) {
  return {{"beta_minus", e.beta_minus}, {"beta_plus", e.beta_plus}, {"nu", e.nu},
          {"alpha_minus", e.alpha_minus}, {"two_star_s", e.two_star_s}, {"tau_lo", e.tau_lo},
          {"tau_hi", e.tau_hi}, {"tau_mid", e.tau_mid()}};
}

json regime_json(const RegimeReport& r) {
  return {{"hardy_subcritical", r.hardy_subcritical},
          {"multiplicity_regime", r.multiplicity_regime},
          {"lambda_threshold_met", r.lambda_threshold_met},
          {"theta_cap_met", r.theta_cap_met},
          {"c_positive", r.c_positive},
          {"lambda_threshold", jnum(r.lambda_threshold)},
          {"all", r.all()}};
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

struct LoadedProfile {
  std::string name;
  SolutionProfile profile;
  json sidecar;
};

LoadedProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile '" + path + "'");
  LoadedProfile lp;
  lp.name = stem_of(path);
  lp.profile = read_profile_csv(in);
  auto side = std::filesystem::path(path).replace_extension(".json");
  if (std::filesystem::exists(side)) {
    std::ifstream js(side);
    lp.sidecar = json::parse(js);
    apply_sidecar(lp.profile, lp.sidecar);
  }
  return lp;
}

void write_profile(RunManifest& m, const RunConfig& cfg, const std::string& base,
                   const SolutionProfile& prof, const json& extra = json::object()) {
  if (cfg.output.csv) m.write(base + ".csv", profile_csv(prof));
  if (cfg.output.json) {
    auto side = profile_sidecar(prof);
    for (const auto& [k, v] : extra.items()) side[k] = v;
    m.write(base + ".json", side.dump(2) + "\n");
  }
}

SolutionProfile solve_profile(const RunConfig& cfg, const EuclideanProblem& pb, double p, int node_target) {
  if (cfg.solver.method == "variational") {
    if (node_target != 0) throw ConfigError("'solver.method' variational only computes node_target 0");
    VariationalOptions o;
    o.nodes_per_decade = cfg.solver.nodes_per_decade;
    o.inner_fraction = cfg.solver.inner_fraction;
    return solve_variational(pb, p, o).profile;
  }
  if (p == 0.0) {
    ContinuationSchedule sched{{0.1, 0.05, 0.025, 0.0125, 0.0}, true};
    auto run = continuation_to_critical(pb, sched, node_target, cfg.shooting_options());
    if (run.failure_index) throw SolverFailure("critical solve: " + run.failure_message, {});
    return std::move(run.steps.back().profile);
  }
  return solve_dirichlet_shooting(pb, p, node_target, cfg.shooting_options());
}

ExponentFit origin_fit(const SolutionProfile& prof, const EuclideanProblem& pb, double p) {
  const double r1 = 2.0 * prof.v.grid().inner();
  return asymptotic_exponent(prof.v, r1, 10.0 * r1, origin_correction_exponents(pb, p));
}

}  // namespace

int cmd_constants(const CommandContext& ctx) {
  const auto& prm = ctx.config.params;
  validate_admissible(prm);
  const auto e = exponent_set(prm.n, prm.s, prm.gamma);
  const auto regime = admissibility(prm);
  json j;
  j["version"] = kVersion;
  j["params"] = params_to_json(prm);
  j["exponents"] = exponents_json(e);
  j["regime"] = regime_json(regime);
  j["b_at_origin"] = b_at_origin(prm.n, prm.s);
  if (prm.n >= 5) j["h_constant"] = h_gamma_lambda(0.5, prm);
  out_of(ctx) << j.dump(2) << "\n";
  return kOk;
}

int cmd_weights(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  const auto& w = cfg.weights;
  const int n = cfg.params.n;
  auto m = make_manifest(ctx, "weights");
  const auto grid = RadialGrid::with_density(w.r_min, w.r_max, w.nodes_per_decade);
  const GreenTable table(n, w.r_min, w.r_max);
  std::ostringstream os;
  os << "r,G";
  for (double p : w.p) os << ",V_" << num(p);
  os << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    os << num(r) << ',' << num(table.G(r));
    for (double p : w.p) os << ',' << num(table.V(r, p));
    os << "\n";
  }
  m.write("weights.csv", os.str());
  m.operation("weights", "ok", std::to_string(grid.size()) + " radii");
  m.finish();
  return kOk;
}

int cmd_bridge(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  validate_admissible(cfg.params);
  auto m = make_manifest(ctx, "bridge");
  const int n = cfg.params.n;
  const double q = critical_exponent(n, cfg.params.s) - cfg.params.p_defect;
  RadialGrid table_grid = RadialGrid::with_density(cfg.solver.inner_fraction * cfg.solver.radius,
                                                   cfg.solver.radius, 20.0);
  for (const auto& path : cfg.input.profiles) {
    auto lp = load_profile(path);
    lp.profile.v.grid().require_unit_ball();
    SolutionProfile t = lp.profile;
    t.v = cfg.input.direction == "to_euclidean" ? to_euclidean(lp.profile.v, n)
                                                : to_hyperbolic(lp.profile.v, n);
    t.dv = t.v.derivative();
    t.method = lp.profile.method + (cfg.input.direction == "to_euclidean" ? "+euclidean" : "+hyperbolic");
    write_profile(m, cfg, lp.name + "_" + cfg.input.direction.substr(3), t);
    m.operation("transport " + lp.name, "ok", cfg.input.direction);
    table_grid = lp.profile.v.grid();
  }
  std::ostringstream os;
  os << "r,h,b\n";
  for (std::size_t i = 0; i < table_grid.size(); ++i) {
    const double r = table_grid[i];
    os << num(r) << ',' << num(h_conformal_exact(r, cfg.params)) << ',' << num(b_weight_q(r, n, cfg.params.s, q))
       << "\n";
  }
  m.write("bridge_table.csv", os.str());
  m.operation("table", "ok");
  m.finish();
  out_of(ctx) << os.str();
  return kOk;
}

int cmd_solve(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  validate_admissible(cfg.params);
  auto m = make_manifest(ctx, "solve");
  const auto pb = cfg.problem();
  const double p = cfg.params.p_defect;
  SolutionProfile prof;
  try {
    prof = solve_profile(cfg, pb, p, cfg.solver.node_target);
  } catch (const SolverFailure& e) {
    m.operation("solve", "failed", e.what());
    m.finish();
    throw;
  }
  const auto fit = origin_fit(prof, pb, p);
  json extra{{"origin_slope", jnum(fit.slope)},
             {"expected_slope", -pb.exponents().beta_minus},
             {"residual_tol", cfg.solver.residual_tol}};
  write_profile(m, cfg, "profile", prof, extra);
  m.operation("solve", prof.converged ? "ok" : "failed",
              "residual " + num(prof.residual_norm) + ", nodes " + std::to_string(prof.node_count));
  m.finish();
  out_of(ctx) << profile_sidecar(prof).dump(2) << "\n";
  if (!prof.converged) {
    std::cerr << "solve: not converged (residual " << prof.residual_norm << ", boundary "
              << prof.boundary_value << ")\n";
    return kSolverFailure;
  }
  return kOk;
}

int cmd_bubble(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  validate_admissible(cfg.params);
  auto m = make_manifest(ctx, "bubble");
  const auto& prm = cfg.params;
  const double b0 = b_at_origin(prm.n, prm.s) * cfg.solver.b_scale;
  LimitOptions o;
  o.nodes_per_decade = cfg.solver.nodes_per_decade;
  o.decades_each_side = cfg.solver.limit_decades;
  const auto bub = solve_limit_equation(prm.n, prm.s, prm.gamma, b0, o);
  json extra{{"b0", b0},
             {"peak_radius", bub.peak_radius},
             {"K_minus", bub.K_minus},
             {"K_plus", bub.K_plus},
             {"value_mismatch", bub.value_mismatch}};
  write_profile(m, cfg, "bubble", bub.profile, extra);
  m.operation("bubble", bub.converged ? "ok" : "failed", "mismatch " + num(bub.value_mismatch));
  m.finish();
  out_of(ctx) << extra.dump(2) << "\n";
  return bub.converged ? kOk : kSolverFailure;
}

int cmd_continue(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  validate_admissible(cfg.params);
  auto m = make_manifest(ctx, "continue");
  const auto pb = cfg.problem();
  ContinuationSchedule sched;
  sched.p_values = cfg.solver.schedule;
  sched.validate(pb.exponents().two_star_s);
  const auto run = continuation_to_critical(pb, sched, cfg.solver.node_target, cfg.shooting_options());

  std::ostringstream os;
  os << "p,K0,energy,h1_norm,nonlinear_mass,weighted_sup,tau_sup,increment,node_count,residual_norm\n";
  json steps = json::array();
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const auto& s = run.steps[i];
    std::ostringstream name;
    name << "steps/step_" << std::setw(2) << std::setfill('0') << i;
    write_profile(m, cfg, name.str(), s.profile);
    os << num(s.p) << ',' << num(s.profile.K0) << ',' << num(s.profile.energy) << ',' << num(s.h1_norm)
       << ',' << num(s.nonlinear_mass) << ',' << num(s.weighted_sup) << ',' << num(s.tau_sup) << ','
       << num(s.increment) << ',' << s.profile.node_count << ',' << num(s.profile.residual_norm) << "\n";
    steps.push_back({{"p", s.p},
                     {"profile", name.str() + ".csv"},
                     {"h1_norm", s.h1_norm},
                     {"nonlinear_mass", s.nonlinear_mass},
                     {"weighted_sup", s.weighted_sup},
                     {"tau_sup", s.tau_sup},
                     {"increment", s.increment}});
  }
  m.write("continuation.csv", os.str());
  const auto verdict = compactness_verdict(run, cfg.params);
  json j{{"params", params_to_json(cfg.params)},
         {"radius", cfg.solver.radius},
         {"node_target", cfg.solver.node_target},
         {"schedule", cfg.solver.schedule},
         {"regime", regime_json(run.regime)},
         {"steps", steps},
         {"verdict", to_string(verdict.verdict)},
         {"failure_index", run.failure_index ? json(*run.failure_index) : json(nullptr)},
         {"failure_message", run.failure_message}};
  m.write("continuation.json", j.dump(2) + "\n");
  m.operation("continue", run.failure_index ? "failed" : "ok",
              std::to_string(run.steps.size()) + " steps");
  m.finish();
  out_of(ctx) << os.str();
  if (run.failure_index) {
    std::cerr << "continue: solve failed at schedule index " << *run.failure_index << ": "
              << run.failure_message << "\n";
    return kSolverFailure;
  }
  return kOk;
}

namespace {

std::string envelope_csv(const EnvelopeReport& env) {
  std::ostringstream os;
  os << "r_lo,r_hi,worst_ratio\n";
  for (const auto& a : env.annuli) os << num(a.r_lo) << ',' << num(a.r_hi) << ',' << num(a.worst_ratio) << "\n";
  return os.str();
}

json scales_json(const std::vector<DetectedScale>& scales) {
  json arr = json::array();
  for (const auto& s : scales)
    arr.push_back({{"mu", s.mu}, {"radius", s.radius}, {"weighted_peak", s.weighted_peak}});
  return arr;
}

}  // namespace

int cmd_blowup(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  validate_admissible(cfg.params);
  auto m = make_manifest(ctx, "blowup");
  DetectOptions det;
  det.tau = cfg.blowup.tau;
  json j;
  if (!cfg.input.run.empty()) {
    const std::filesystem::path dir(cfg.input.run);
    std::ifstream in(dir / "continuation.json");
    if (!in) throw ConfigError("cannot open '" + (dir / "continuation.json").string() + "'");
    const auto run = json::parse(in);
    std::vector<FamilySample> fam;
    for (const auto& s : run.at("steps"))
      fam.push_back({s.at("p").get<double>(), s.at("tau_sup").get<double>(),
                     s.at("weighted_sup").get<double>(), s.at("increment").get<double>()});
    const auto rep = compactness_verdict(fam, cfg.params);
    j["source"] = "continuation run";
    j["verdict"] = to_string(rep.verdict);
    j["theory_compact"] = rep.theory_compact;
    j["consistent"] = rep.consistent;
    j["sup_growth"] = jnum(rep.sup_growth);
    j["decay_rate"] = jnum(rep.decay.fitted_rate);
    j["decay_ratios"] = rep.decay.ratios;
    j["reason"] = rep.reason;
    if (!run.at("steps").empty()) {
      const auto& last = run.at("steps").back();
      auto lp = load_profile((dir / last.at("profile").get<std::string>()).string());
      const double p = last.at("p").get<double>();
      const auto scales = detect_scales(lp.profile, p, det);
      std::vector<double> mus;
      for (const auto& s : scales) mus.push_back(s.mu);
      const auto env = envelope_check(lp.profile, mus, origin_weighted_sup(lp.profile));
      j["scales"] = scales_json(scales);
      j["envelope_c"] = jnum(env.c_fit);
      m.write("envelope.csv", envelope_csv(env));
    }
  } else {
    const auto& prm = cfg.params;
    const auto bub = solve_limit_equation(prm.n, prm.s, prm.gamma, 1.0);
    const auto grid = RadialGrid::with_density(1e-7, 10.0, cfg.solver.nodes_per_decade);
    const auto planted = planted_bubbles(bub, cfg.blowup.fixture_mus, 0.0, grid);
    const auto scales = detect_scales(planted, 0.0, det);
    std::vector<double> mus;
    for (const auto& s : scales) mus.push_back(s.mu);
    const auto env = envelope_check(planted, mus, 0.0);
    j["source"] = "manufactured bubble stack; the solver cannot produce blow-up in the compact regime";
    j["planted_mus"] = cfg.blowup.fixture_mus;
    j["scales"] = scales_json(scales);
    j["envelope_c"] = jnum(env.c_fit);
    j["verdict"] = to_string(Verdict::Inconclusive);
    m.write("envelope.csv", envelope_csv(env));
  }
  m.write("blowup.json", j.dump(2) + "\n");
  m.operation("blowup", "ok", j.at("verdict").get<std::string>());
  m.finish();
  out_of(ctx) << j.dump(2) << "\n";
  return kOk;
}

int cmd_verify(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  const auto& vc = cfg.verify;
  auto m = make_manifest(ctx, "verify");
  VerificationReport rep;
  rep.provenance = "hslab " + std::string(kVersion) + ", config " + m.config_hash() + ", seed " +
                   std::to_string(ctx.seed) + ", hardy bumps " + std::to_string(vc.hardy_samples) +
                   ", hardy-sobolev bumps " + std::to_string(vc.hardy_sobolev_samples);

  std::vector<SolutionProfile> bounded;
  for (const auto& path : cfg.input.profiles) {
    auto lp = load_profile(path);
    auto& prof = lp.profile;
    const auto& prm = lp.sidecar.contains("params") ? prof.params : cfg.params;
    validate_admissible(prm);
    const auto& g = prof.v.grid();
    const auto e = exponent_set(prm.n, prm.s, prm.gamma);
    if (std::isinf(prof.radius)) {
      const double b0 = lp.sidecar.value("b0", 1.0);
      const auto coeffs = EquationCoefficients::limit(prm.n, prm.s, prm.gamma, b0);
      std::size_t peak = 0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (std::pow(g[i], 0.5 * (prm.n - 2.0)) * std::abs(prof.v[i]) >
            std::pow(g[peak], 0.5 * (prm.n - 2.0)) * std::abs(prof.v[peak]))
          peak = i;
      const auto poh = pohozaev_residual(prof, coeffs, std::max(0.25 * g[peak], g.inner()),
                                         std::min(4.0 * g[peak], g.outer()));
      rep.add(lp.name + ".pohozaev", poh.relative, vc.pohozaev_tolerance, poh.relative <= vc.pohozaev_tolerance);
      const auto lo = asymptotic_exponent(prof.v, 10.0 * g.inner(), 100.0 * g.inner());
      const auto hi = asymptotic_exponent(prof.v, 0.01 * g.outer(), 0.1 * g.outer());
      const double elo = std::abs(lo.slope + e.beta_minus) / std::abs(e.beta_minus);
      const double ehi = std::abs(hi.slope + e.beta_plus) / std::abs(e.beta_plus);
      rep.add(lp.name + ".slope_origin", lo.slope, vc.slope_tolerance, lo.defined && elo <= vc.slope_tolerance);
      rep.add(lp.name + ".slope_infinity", hi.slope, vc.slope_tolerance, hi.defined && ehi <= vc.slope_tolerance);
      continue;
    }
    const EuclideanProblem pb(prm, prof.radius);
    const double p = prof.p_defect;
    const auto coeffs = EquationCoefficients::from_problem(pb, p, g.inner());
    const auto poh = pohozaev_residual(prof, coeffs, g.inner(), g.outer());
    rep.add(lp.name + ".pohozaev", poh.relative, vc.pohozaev_tolerance, poh.relative <= vc.pohozaev_tolerance);
    const auto corr = origin_correction_exponents(pb, p);
    const auto fit = origin_fit(prof, pb, p);
    const double err = std::abs(fit.slope + e.beta_minus) / std::abs(e.beta_minus);
    rep.add(lp.name + ".slope_origin", fit.slope, vc.slope_tolerance, fit.defined && err <= vc.slope_tolerance,
            "expected " + num(-e.beta_minus));
    const auto ws = window_stability(prof.v, 2.0 * g.inner(), 1.0, 0.5, corr);
    rep.add(lp.name + ".window_shift", ws.shift, 0.5 * ws.base.std_error, ws.stable);
    const double res = equation_residual(pb, prof.v, prof.dv, p);
    rep.add(lp.name + ".residual", res, cfg.solver.residual_tol, res <= cfg.solver.residual_tol);
    bounded.push_back(std::move(prof));
  }
  if (bounded.size() > 1) {
    const auto levels = energy_levels(bounded);
    rep.add("energy_levels.positive", levels.all_positive ? 1.0 : 0.0, 1.0, levels.all_positive);
    rep.add("energy_levels.monotone_in_nodes", levels.monotone_in_nodes ? 1.0 : 0.0, 1.0,
            levels.monotone_in_nodes, "reported only");
  }

  const auto& prm = cfg.params;
  if (vc.hardy_samples > 0) {
    const auto hs = hardy_sweep(prm.n, ctx.seed, vc.hardy_samples);
    rep.add("hardy.worst_relative_margin", hs.worst, -1e-8, hs.failures == 0,
            std::to_string(hs.samples) + " bumps, seed " + std::to_string(ctx.seed));
  }
  if (vc.hardy_sobolev_samples > 0) {
    validate_admissible(prm);
    const auto a = hardy_sobolev_sweep(prm.n, prm.s, prm.gamma, ctx.seed, vc.hardy_sobolev_samples);
    const auto b = hardy_sobolev_sweep(prm.n, prm.s, prm.gamma, ctx.seed + 1, vc.hardy_sobolev_samples);
    rep.add("hardy_sobolev.infimum", a.worst, 0.0, a.worst > 0.0 && a.failures == 0,
            std::to_string(a.samples) + " bumps, seed " + std::to_string(ctx.seed));
    const double drift = std::abs(a.worst - b.worst) / std::max(a.worst, b.worst);
    rep.add("hardy_sobolev.reseed_drift", drift, 0.05, drift <= 0.05,
            "seeds " + std::to_string(ctx.seed) + " and " + std::to_string(ctx.seed + 1));
  }
  m.write("verification.json", rep.to_json().dump(2) + "\n");
  m.write("verification.csv", rep.to_csv());
  m.operation("verify", rep.all_pass() ? "ok" : "failed", std::to_string(rep.checks.size()) + " checks");
  m.finish();
  out_of(ctx) << rep.to_csv();
  return kOk;
}

namespace {

struct SweepPoint {
  double gamma, s, lambda, p;
  int node_target;
};

struct SweepRow {
  SweepPoint point{};
  std::string status;
  std::string message;
  SolutionProfile profile;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double expected_slope = std::numeric_limits<double>::quiet_NaN();
  double pohozaev = std::numeric_limits<double>::quiet_NaN();
  double tau_sup = std::numeric_limits<double>::quiet_NaN();
  double weighted = std::numeric_limits<double>::quiet_NaN();
  bool regime_all = false;
};

template <class T>
std::vector<T> axis(const std::vector<T>& v, T base) {
  return v.empty() ? std::vector<T>{base} : v;
}

SweepRow solve_point(const RunConfig& cfg, const SweepPoint& pt) {
  SweepRow row;
  row.point = pt;
  ProblemParams prm = cfg.params;
  prm.gamma = pt.gamma;
  prm.s = pt.s;
  prm.lambda = pt.lambda;
  prm.p_defect = pt.p;
  try {
    validate_admissible(prm);
  } catch (const AdmissibilityError& e) {
    row.status = "inadmissible";
    row.message = e.what();
    return row;
  }
  row.regime_all = admissibility(prm).all();
  try {
    const EuclideanProblem pb(prm, cfg.solver.radius, LeadingH{}, ConformalB{}, cfg.solver.b_scale);
    row.profile = solve_profile(cfg, pb, pt.p, pt.node_target);
    const auto& g = row.profile.v.grid();
    row.slope = origin_fit(row.profile, pb, pt.p).slope;
    row.expected_slope = -pb.exponents().beta_minus;
    const auto coeffs = EquationCoefficients::from_problem(pb, pt.p, g.inner());
    row.pohozaev = pohozaev_residual(row.profile, coeffs, g.inner(), g.outer()).relative;
    row.tau_sup = tau_weighted_sup(row.profile.v, pb.exponents().tau_mid());
    row.weighted = weighted_sup(row.profile.v, prm.n, pt.p, pb.exponents().two_star_s);
    row.status = row.profile.converged ? "ok" : "unconverged";
  } catch (const std::exception& e) {
    row.status = "failed";
    row.message = e.what();
  }
  return row;
}

std::string csv_text(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

}  // namespace

SweepOutput run_sweep(const RunConfig& cfg, unsigned workers) {
  std::vector<SweepPoint> points;
  const auto gammas = axis(cfg.sweep.gamma, cfg.params.gamma);
  const auto ss = axis(cfg.sweep.s, cfg.params.s);
  const auto lambdas = axis(cfg.sweep.lambda, cfg.params.lambda);
  const auto ps = axis(cfg.sweep.p, cfg.params.p_defect);
  const auto ks = axis(cfg.sweep.node_target, cfg.solver.node_target);
  for (double g : gammas)
    for (double s : ss)
      for (double l : lambdas)
        for (double p : ps)
          for (int k : ks) points.push_back({g, s, l, p, k});

  const auto rows = run_ordered<SweepRow>(points.size(), workers,
                                          [&](std::size_t i) { return solve_point(cfg, points[i]); });

  SweepOutput out;
  out.rows = rows.size();
  std::ostringstream os;
  os << "index,n,s,gamma,lambda,p,node_target,status,K0,energy,sup,node_count,residual,slope,"
        "expected_slope,pohozaev,tau_sup,weighted_sup,regime_all,message\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool solved = r.status == "ok" || r.status == "unconverged";
    if (r.status == "ok") ++out.succeeded;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    os << i << ',' << cfg.params.n << ',' << num(r.point.s) << ',' << num(r.point.gamma) << ','
       << num(r.point.lambda) << ',' << num(r.point.p) << ',' << r.point.node_target << ',' << r.status << ','
       << num(solved ? r.profile.K0 : nan) << ',' << num(solved ? r.profile.energy : nan) << ','
       << num(solved ? r.profile.v.sup_norm() : nan) << ',' << (solved ? r.profile.node_count : -1) << ','
       << num(solved ? r.profile.residual_norm : nan) << ',' << num(r.slope) << ',' << num(r.expected_slope)
       << ',' << num(r.pohozaev) << ',' << num(r.tau_sup) << ',' << num(r.weighted) << ','
       << (r.regime_all ? 1 : 0) << ',' << csv_text(r.message) << "\n";
  }
  out.rows_csv = os.str();

  if (ps.size() >= 2) {
    std::ostringstream vs;
    vs << "s,gamma,lambda,node_target,samples,verdict,sup_growth,decay_rate,theory_compact,consistent,reason\n";
    const std::size_t stride = ks.size(), block = ps.size() * ks.size();
    for (std::size_t base = 0; base < rows.size(); base += block) {
      for (std::size_t k = 0; k < ks.size(); ++k) {
        std::vector<FamilySample> fam;
        const SolutionProfile* prev = nullptr;
        for (std::size_t j = 0; j < ps.size(); ++j) {
          const auto& r = rows[base + j * stride + k];
          if (r.status != "ok") break;
          double inc = 0.0;
          if (prev != nullptr)
            for (std::size_t i = 0; i < r.profile.v.size(); ++i)
              inc = std::max(inc, std::abs(r.profile.v[i] - prev->v[i]));
          fam.push_back({r.point.p, r.tau_sup, r.weighted, inc});
          prev = &r.profile;
        }
        const auto& first = rows[base + k];
        ProblemParams prm = cfg.params;
        prm.gamma = first.point.gamma;
        prm.s = first.point.s;
        prm.lambda = first.point.lambda;
        const auto rep = compactness_verdict(fam, prm);
        vs << num(first.point.s) << ',' << num(first.point.gamma) << ',' << num(first.point.lambda) << ','
           << first.point.node_target << ',' << fam.size() << ',' << to_string(rep.verdict) << ','
           << num(rep.sup_growth) << ',' << num(rep.decay.fitted_rate) << ',' << (rep.theory_compact ? 1 : 0)
           << ',' << (rep.consistent ? 1 : 0) << ',' << csv_text(rep.reason) << "\n";
      }
    }
    out.verdicts_csv = vs.str();
  }
  return out;
}

int cmd_sweep(const CommandContext& ctx) {
  auto m = make_manifest(ctx, "sweep");
  const auto res = run_sweep(ctx.config, ctx.workers);
  m.write("sweep.csv", res.rows_csv);
  if (!res.verdicts_csv.empty()) m.write("sweep_verdicts.csv", res.verdicts_csv);
  m.operation("sweep", res.succeeded > 0 ? "ok" : "failed",
              std::to_string(res.succeeded) + " of " + std::to_string(res.rows) + " rows solved");
  m.finish();
  out_of(ctx) << res.rows_csv;
  if (!res.verdicts_csv.empty()) out_of(ctx) << res.verdicts_csv;
  return res.succeeded > 0 ? kOk : kSolverFailure;
}

int dispatch(const std::string& name, const CommandContext& ctx) {
  try {
    if (name == "constants") return cmd_constants(ctx);
    if (name == "weights") return cmd_weights(ctx);
    if (name == "bridge") return cmd_bridge(ctx);
    if (name == "solve") return cmd_solve(ctx);
    if (name == "bubble") return cmd_bubble(ctx);
    if (name == "continue") return cmd_continue(ctx);
    if (name == "blowup") return cmd_blowup(ctx);
    if (name == "verify") return cmd_verify(ctx);
    if (name == "sweep") return cmd_sweep(ctx);
    std::cerr << "unknown subcommand '" << name << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const AdmissibilityError& e) {
    std::cerr << "inadmissible parameters: " << e.what() << "\n";
    return kInadmissible;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << " (node counts seen:";
    for (int k : e.node_counts_seen()) std::cerr << ' ' << k;
    std::cerr << ")\n";
    return kSolverFailure;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
}

}  // namespace hslab::cli
