#pragma once

#include <string>
#include <utility>

namespace hslab {

/// Parameters of the singular problem. theta and c describe the leading
/// behaviour h(x) ~ c |x|^{-theta} of the potential at the origin.
struct ProblemParams {
  int n = 5;
  double s = 1.0;
  double gamma = -2.0;
  double lambda = 10.0;
  double theta = 0.0;
  double c = 1.0;
  double p_defect = 0.0;

  /// Throws AdmissibilityError when s, theta or p_defect leave their ranges.
  void validate() const;
};

/// 2(n - s)/(n - 2).
double critical_exponent(int n, double s);
/// 2n/(n - 2).
double sobolev_exponent(int n);

/// Roots of beta^2 - (n-2) beta + gamma = 0; throws AdmissibilityError unless
/// gamma < (n-2)^2/4.
std::pair<double, double> beta_pm(int n, double gamma);

/// 1/2 - sqrt(1/4 - gamma/(n-2)^2); throws when the radicand is negative.
double alpha_minus(int n, double gamma);

struct ExponentSet {
  double beta_minus = 0.0;
  double beta_plus = 0.0;
  double nu = 0.0;  ///< (beta_plus - beta_minus)/2
  double alpha_minus = 0.0;
  double two_star_s = 0.0;
  double tau_lo = 0.0;  ///< open interval (beta_minus, (n-2)/2)
  double tau_hi = 0.0;

  double tau_mid() const noexcept { return 0.5 * (tau_lo + tau_hi); }
};

ExponentSet exponent_set(int n, double s, double gamma);

struct RegimeReport {
  bool hardy_subcritical = false;    ///< gamma < (n-2)^2/4
  bool multiplicity_regime = false;  ///< gamma < (n-2)^2/4 - (2-theta)^2
  bool lambda_threshold_met = false; ///< n >= 5 and lambda > (n-2)/(n-4) (n(n-4)/4 - gamma)
  bool theta_cap_met = false;        ///< theta <= 2 - 2/2*(s)
  bool c_positive = false;
  double lambda_threshold = 0.0;     ///< NaN for n < 5

  bool all() const noexcept {
    return hardy_subcritical && multiplicity_regime && lambda_threshold_met && theta_cap_met &&
           c_positive;
  }
};

RegimeReport admissibility(const ProblemParams& params);

struct BestConstantOptions {
  bool include_bubble = true;  ///< also evaluate the numerically computed limit bubble
  double a_lo = 0.05;          ///< trial-family shape range
  double a_hi = 20.0;
  double tol = 1e-10;
};

struct BestConstantEstimate {
  double value = 0.0;          ///< min over all evaluated candidates
  double trial_value = 0.0;    ///< min over the trial family
  double trial_shape = 0.0;    ///< minimising a
  double bubble_value = 0.0;   ///< quotient of the computed bubble (0 if skipped)
  bool converged = false;
};

/// Radial Rayleigh quotient on R^n
///   (int |u'|^2 - gamma u^2 / r^2) / (int |u|^{2*(s)} r^{-s})^{2/2*(s)}
/// minimised over u_a(r) = r^{-beta_-} (1 + r^a)^{-2 nu / a}, a > 0.
BestConstantEstimate best_constant_estimate(int n, double s, double gamma,
                                            const BestConstantOptions& opts = {});

/// The trial-family quotient at a single shape parameter a.
double trial_family_quotient(int n, double s, double gamma, double a);

}  // namespace hslab
