#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>

#include "hslab/grid.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "hslab/spectral_constants.hpp"
#include "hslab/tridiagonal.hpp"

namespace hslab {

/// Free constants in the n = 3 and n = 4 potentials.
struct LowDimConstants {
  double c3 = 0.0;
  double c4 = 0.0;
};

/// (2 / (1 - r^2))^{(n-2)/2}, defined on [0, 1).
double phi(double r, int n);

/// Leading-order potential of the reduced problem:
///   n >= 5: 4(n-2)/(n-4) gamma + 4 lambda - n(n-2)  (constant)
///   n = 4:  8 gamma log(1/r) + c4
///   n = 3:  4 gamma / r + c3
double h_gamma_lambda(double r, const ProblemParams& params, const LowDimConstants& lowdim = {});

/// Exact potential making v = phi u an exact equivalence:
///   (2/(1-r^2))^2 (gamma V_2 + lambda - n(n-2)/4) - gamma / r^2.
/// Its r -> 0 limit is h_gamma_lambda for n >= 5. Loses digits to cancellation
/// for r below ~1e-4.
double h_conformal_exact(double r, const ProblemParams& params);

/// r^s V_q(r) phi(r)^{2* - q}; the reduced weight for nonlinearity exponent q.
double b_weight_q(double r, int n, double s, double q);
/// b_weight_q with q = 2*(s).
double b_weight(double r, int n, double s);
/// (n-2)^{(2-s)/(n-2)} / 2^{2-s}.
double b_at_origin(int n, double s);

/// v = phi u on u's grid.
RadialFunction to_euclidean(const RadialFunction& u, int n);
/// u = v / phi on v's grid.
RadialFunction to_hyperbolic(const RadialFunction& v, int n);

struct LeadingH {
  LowDimConstants lowdim;
};
struct ConstantH {
  double value = 0.0;
};
/// User potential obeying h ~ c r^{-theta} at the origin. r_dh (r h'(r)) is
/// differentiated numerically when absent.
struct CustomH {
  std::function<double(double)> h;
  std::function<double(double)> r_dh;
  double theta = 0.0;
  double c = 0.0;
  std::string label = "custom";
};
using HSpec = std::variant<LeadingH, ConstantH, CustomH>;

struct ConformalB {};
struct ConstantB {
  double b0 = 1.0;
};
using BSpec = std::variant<ConformalB, ConstantB>;

/// -Delta v - gamma v/r^2 - h v = b |v|^{q-2} v / r^s on the ball of radius R,
/// v = 0 on the boundary. Copies share the cached weight tables.
class EuclideanProblem {
public:
  EuclideanProblem(ProblemParams params, double radius, HSpec h = LeadingH{}, BSpec b = ConformalB{},
                   double b_scale = 1.0);

  const ProblemParams& params() const noexcept { return params_; }
  double radius() const noexcept { return radius_; }
  const HSpec& h_spec() const noexcept { return h_; }
  const BSpec& b_spec() const noexcept { return b_; }
  double b_scale() const noexcept { return b_scale_; }
  const ExponentSet& exponents() const noexcept { return exps_; }

  double h(double r) const;
  /// r h'(r)
  double r_dh(double r) const;
  double b(double r) const;
  /// r b'(r)
  double r_db(double r) const;
  double b0() const;
  bool h_is_constant() const noexcept;

  /// (theta, c) with h(r) ~ c r^{-theta} at 0, as implied by the h choice.
  std::pair<double, double> leading_behaviour() const;
  /// max over [r0, 10 r0] of |r^theta h - c| / max(|c|, 1).
  double leading_behaviour_error(double r0) const;

  std::string h_label() const;
  std::string b_label() const;

  EuclideanProblem with_b_scale(double factor) const;
  EuclideanProblem with_defect(double p) const;

private:
  ProblemParams params_;
  double radius_;
  HSpec h_;
  BSpec b_;
  double b_scale_;
  ExponentSet exps_;
  std::shared_ptr<const GreenTable> green_;
};

struct Lambda0Options {
  double nodes_per_decade = 600.0;
  double inner_fraction = 1e-6;  ///< r0 = inner_fraction * R
  bool richardson = true;
};

struct Lambda0Result {
  double value = 0.0;          ///< extrapolated when richardson is on
  double coarse = 0.0;
  double fine = 0.0;
  double last_rayleigh = 0.0;
  int iterations = 0;
  bool converged = false;
  bool coercive() const noexcept { return converged && value > 0.0; }
};

/// Smallest ratio (int |v'|^2 - gamma v^2/r^2 - h v^2) / int |v'|^2 over
/// radial v vanishing at R. Throws std::runtime_error with the last Rayleigh
/// quotient when the inverse iteration stalls.
Lambda0Result coercivity_lambda0(const EuclideanProblem& problem, const Lambda0Options& opts = {});

struct RadialEigenResult {
  double value = 0.0;
  RadialFunction vector;  ///< positive, zero at the outer node
  bool converged = false;
  double last_rayleigh = 0.0;
  int iterations = 0;
};

/// Lowest eigenpair of -v'' - (n-1)v'/r - W(r) v = mu v on the ball, v(R) = 0,
/// natural condition at the inner node. P1 elements in t = log r.
RadialEigenResult radial_dirichlet_eigen(int n, const RadialGrid& grid,
                                         const std::function<double(double)>& W);

struct EquivalenceReport {
  double max_difference = 0.0;          ///< max |R_E[phi u] - phi^{2*-1} R_B[u]|
  double relative_difference = 0.0;     ///< scaled by the largest single term
  double max_hyperbolic_residual = 0.0;
  double max_euclidean_residual = 0.0;
};

/// Compares the hyperbolic residual of u with the Euclidean residual of
/// v = phi u (exact h, weight b_q with q = 2*(s) - p_defect), both from
/// fourth-order finite differences on u's grid.
EquivalenceReport residual_equivalence_check(const RadialFunction& u, const ProblemParams& params);

}  // namespace hslab
