#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hslab/continuation.hpp"
#include "hslab/limit_equation.hpp"
#include "hslab/radial_solver.hpp"

namespace hslab {

/// k = mu^{1 - p/(2*(s)-2)}.
double concentration_radius(double mu, double p, double two_star_s);

struct RescaledProfile {
  SolutionProfile profile;
  bool truncated = false;  ///< some target radii fell outside the source support
};

/// u~(x) = mu^{(n-2)/2} u(k x). Without a target grid the result lives on
/// u's grid dilated by 1/k, which is exact; with a target, samples whose
/// pre-image leaves u's support are set to 0 and flagged.
RescaledProfile rescale_profile(const SolutionProfile& u, double mu, double p,
                                const std::optional<RadialGrid>& target = std::nullopt);

/// Canonical bubble at any radius, with the asymptotic tails K_- rho^{-beta_-}
/// and K_+ rho^{-beta_+} outside the computed support.
double bubble_value(const LimitBubble& bubble, double rho);

/// Sum over i of mu_i^{-(n-2)/2} U(r / k_i), sampled on `grid`.
SolutionProfile planted_bubbles(const LimitBubble& bubble, std::span<const double> mus, double p,
                                const RadialGrid& grid);

struct DetectOptions {
  std::optional<double> tau;         ///< default: midpoint of (beta_-, (n-2)/2)
  double separation_decades = 1.0;   ///< minimum spacing of distinct scales
  double outer_fraction = 0.1;       ///< maxima beyond outer_fraction * R are not concentration
  double noise_floor = 1e-10;        ///< relative to the global weighted maximum
};

struct DetectedScale {
  double mu = 0.0;
  double radius = 0.0;        ///< maximiser of r^{(n-2)/2} |u|^{1 - p/(2*(s)-2)}
  double weighted_peak = 0.0; ///< value of that weight at the maximiser
};

/// Concentration scales of a profile, sorted by increasing mu.
///
/// Candidates are the interior local maximisers r* of
/// w(r) = r^{(n-2)/2} |u|^{1 - p/(2*(s)-2)}, together with the first w-peak
/// outward of each local maximum of r^tau |u|. Each yields
/// mu = |u(r*)|^{-2/(n-2)}. Maxima closer than separation_decades keep the
/// larger w.
std::vector<DetectedScale> detect_scales(const SolutionProfile& u, double p,
                                         const DetectOptions& opts = {});

struct BubbleFamily {
  std::vector<double> mu;     ///< increasing
  std::vector<double> k;      ///< mu^{1 - p/(2*(s)-2)}
  std::vector<double> t;      ///< estimates of lim mu^p in (0, 1]
  std::vector<SolutionProfile> bubbles;  ///< rescaled profiles
  std::optional<SolutionProfile> weak_limit;
  double p = 0.0;

  /// Throws std::logic_error when the ordering, k or t invariants fail.
  void validate(double two_star_s) const;
};

/// Family from the scales detected in u at defect p; t_i = mu_i^p.
BubbleFamily build_family(const SolutionProfile& u, double p, const DetectOptions& opts = {});

/// t = mu^p estimated from samples (p_j, mu_j) ordered by decreasing p. The
/// last sample is used; with `richardson` the last two are extrapolated
/// linearly in p.
double estimate_t(std::span<const double> p, std::span<const double> mu, bool richardson = false);

struct AnnulusRatio {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double worst_ratio = 0.0;
};

struct EnvelopeReport {
  double c_fit = 0.0;         ///< smallest C with |u| <= C envelope on the grid
  double worst_radius = 0.0;
  double c_budget = 0.0;
  bool pass = false;          ///< c_fit <= c_budget
  std::vector<AnnulusRatio> annuli;  ///< one entry per decade
};

/// Envelope sum_i mu_i^{nu}/(mu_i^{2 nu} r^{beta_-} + r^{beta_+}) + u0_sup / r^{beta_-}
/// with nu = (beta_+ - beta_-)/2.
EnvelopeReport envelope_check(const SolutionProfile& u, std::span<const double> mus, double u0_sup,
                              double c_budget = std::numeric_limits<double>::infinity());

/// sup r^{beta_-} |u| over the grid.
double origin_weighted_sup(const SolutionProfile& u);

struct RateSample {
  double p = 0.0;
  double mu_N = 0.0;
};

struct BubbleIntegral {
  double t = 1.0;
  double mass_theta = 0.0;  ///< int u~^2 |x|^{-theta} dx
  double mass_s = 0.0;      ///< int |u~|^{2*(s)} |x|^{-s} dx
};

/// Integrals of a rescaled bubble on R^n (Simpson in log r over its grid).
BubbleIntegral bubble_integrals(const SolutionProfile& bubble, double theta, double t = 1.0);

struct RateReport {
  bool applicable = false;
  std::vector<double> measured;   ///< p / mu_N^{2 - theta}
  double measured_limit = 0.0;
  double formula = 0.0;           ///< right-hand side of the rate identity
  bool sign_contradiction = false;///< formula < 0 while every p >= 0
  std::string note;
};

/// Compares p / mu_N^{2-theta} with
///   -((2-theta)/2) c / t_N^{(n-theta)/(2*(s)-2)} 4(n-s)/(n-2)^2
///     int u~_N^2 |x|^{-theta} / sum_i b(0) t_i^{-(n-2)/(2*(s)-2)} int |u~_i|^{2*(s)} |x|^{-s}.
/// The measured limit is the value at the smallest mu_N, or a linear
/// extrapolation in mu_N^{2-theta} of the last two samples with `richardson`.
RateReport rate_check(std::span<const RateSample> samples, const ProblemParams& params, double b0,
                      std::span<const BubbleIntegral> bubbles, bool richardson = false);

enum class Verdict { Compact, Blowup, Inconclusive };
std::string to_string(Verdict v);

struct FamilySample {
  double p = 0.0;
  double tau_sup = 0.0;      ///< sup r^tau |u|
  double weighted_sup = 0.0; ///< sup r^{(n-2)/2} |u|^{1 - p/(2*(s)-2)}
  double increment = 0.0;    ///< sup-norm distance to the previous sample
};

struct VerdictOptions {
  double growth_bound = 10.0;  ///< tau sups within this factor of the first count as bounded
  double max_decay_rate = 0.75;
};

struct CompactnessReport {
  Verdict verdict = Verdict::Inconclusive;
  bool theory_compact = false;  ///< multiplicity regime and c > 0
  bool consistent = false;      ///< verdict agrees with the theory flag
  double sup_growth = 0.0;      ///< max tau_sup / first tau_sup
  DecayReport decay;
  std::string reason;
};

/// COMPACT when the tau-weighted sups stay bounded and the increments decay
/// geometrically; BLOWUP when the tau-weighted sups grow past the bound and
/// increase over the tail of the family; INCONCLUSIVE otherwise.
CompactnessReport compactness_verdict(std::span<const FamilySample> family,
                                      const ProblemParams& params, const VerdictOptions& opts = {});
CompactnessReport compactness_verdict(const ContinuationRun& run, const ProblemParams& params,
                                      const VerdictOptions& opts = {});

/// N <= Lambda (b(0) / mu_best)^{2*(s)/(2*(s)-2)}.
double bubble_count_bound(double lambda_budget, double b0, double best_constant, double two_star_s);

}  // namespace hslab
