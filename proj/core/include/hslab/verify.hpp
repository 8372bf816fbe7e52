#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hslab/conformal_bridge.hpp"
#include "hslab/radial_solver.hpp"

namespace hslab {

/// Coefficients of -Delta v - gamma v/r^2 - h v = b |v|^{q-2} v / r^s.
struct EquationCoefficients {
  int n = 5;
  double s = 1.0;
  double gamma = 0.0;
  double p = 0.0;  ///< q = 2*(s) - p
  std::function<double(double)> h;
  std::function<double(double)> r_dh;
  std::function<double(double)> b;
  std::function<double(double)> r_db;
  const EuclideanProblem* problem = nullptr;  ///< enables the Frobenius jet at the inner sphere
  double inner_cutoff = 0.0;                  ///< r0 of the solve that produced the profile

  double q() const { return critical_exponent(n, s) - p; }

  /// The problem's coefficients; `problem` must outlive the result.
  static EquationCoefficients from_problem(const EuclideanProblem& problem, double p,
                                           double inner_cutoff = 0.0);
  /// h = 0 and constant b = b0 on R^n.
  static EquationCoefficients limit(int n, double s, double gamma, double b0);
};

/// Terms of the Pohozaev identity on the annulus a < r < b for the radial
/// dilation field. Terms carrying the centre y0 integrate to zero over spheres
/// for radial data and are reported as such.
struct PohozaevBreakdown {
  double h_term = 0.0;        ///< -int h v^2
  double dh_term = 0.0;       ///< -1/2 int (r h') v^2
  double defect_term = 0.0;   ///< -p (n-2)/(2q) int b |v|^q r^{-s}
  double db_term = 0.0;       ///< -1/q int (r b') |v|^q r^{-s}
  double gamma_offset = 0.0;  ///< -gamma int (x, y0) |x|^{-4} v^2
  double s_offset = 0.0;      ///< -s/q int (x, y0) |x|^{-s-2} b |v|^q
  double flux_inner = 0.0;
  double flux_outer = 0.0;
  double total = 0.0;         ///< sum of volume terms - (flux_outer - flux_inner)
  double nonlinear_mass = 0.0;  ///< int b |v|^q r^{-s}, the reference scale
  double max_term = 0.0;        ///< largest of the terms above and nonlinear_mass
  double relative = 0.0;      ///< |total| / max_term
  bool jet_at_inner = false;
};

/// Evaluates every Pohozaev term of `v` on (a, b) with y0 = 0 by Simpson
/// quadrature in log r on a sub-grid of the profile's spacing (values by
/// interpolation). The inner flux uses the Frobenius jet when a < 10 r0 and
/// the coefficients carry a problem. Throws ExtrapolationError if the annulus
/// leaves the profile's grid.
PohozaevBreakdown pohozaev_residual(const SolutionProfile& v, const EquationCoefficients& coeffs,
                                    double a, double b);

struct InequalityMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;    ///< rhs - lhs
  double relative = 0.0;  ///< margin / rhs
};

/// ((n-2)^2/4) int V_2 u^2 dv <= int |grad_B u|^2 dv.
InequalityMargin hardy_check(const RadialFunction& u, int n);

struct HardySobolevQuotient {
  double numerator = 0.0;    ///< int |grad_B u|^2 - gamma int V_2 u^2
  double denominator = 0.0;  ///< (int V_{2*(s)} |u|^{2*(s)})^{2/2*(s)}
  double quotient = 0.0;
};

/// Throws DomainError for a vanishing denominator.
HardySobolevQuotient hardy_sobolev_check(const RadialFunction& u, int n, double s, double gamma);

/// Smooth bump sum supported in [r_lo, r_hi], drawn from (seed, index).
RadialFunction random_bump(std::uint64_t seed, std::uint64_t index, const RadialGrid& grid,
                           double r_lo, double r_hi);

struct SweepSummary {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double worst = 0.0;  ///< min relative Hardy margin, or min quotient
  double best = 0.0;   ///< max of the same
  std::size_t failures = 0;
};

/// Relative Hardy margins over `count` random bumps.
SweepSummary hardy_sweep(int n, std::uint64_t seed, std::size_t count, double tol = 1e-8);
/// Hardy-Sobolev quotients over `count` random bumps; failures count
/// non-positive quotients.
SweepSummary hardy_sobolev_sweep(int n, double s, double gamma, std::uint64_t seed,
                                 std::size_t count);

struct ExponentFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  bool defined = false;   ///< false when v changes sign or vanishes in the window
  std::vector<double> corrections;  ///< fitted coefficients of r^{e_j}
};

/// Least-squares slope of log|v| against log r over the grid nodes in
/// [r1, r2]. Optional correction exponents e_j add terms c_j r^{e_j}.
ExponentFit asymptotic_exponent(const RadialFunction& v, double r1, double r2,
                                const std::vector<double>& correction_exponents = {});

/// Slope of log|u| against log G(r) (the hyperbolic form of the same fit).
ExponentFit asymptotic_exponent_green(const RadialFunction& u, int n, double r1, double r2);

struct WindowStability {
  ExponentFit base;
  ExponentFit shifted;
  double shift = 0.0;  ///< |slope difference|
  bool stable = false; ///< shift < 0.5 * base.std_error
};

/// Fits on [r1, 10^decades r1] and on the same window moved by `shift_decades`.
WindowStability window_stability(const RadialFunction& v, double r1, double decades = 1.0,
                                 double shift_decades = 0.5,
                                 const std::vector<double>& correction_exponents = {});

/// Exponents of the leading corrections to log|v| + beta_- log r near the
/// origin: sigma, 2 sigma, 3 sigma and 2 - theta, with
/// sigma = 2 - s - beta_- (q - 2). Duplicates within 1e-9 are dropped.
std::vector<double> origin_correction_exponents(const EuclideanProblem& problem, double p);

struct EnergyRow {
  int node_count = 0;
  double p = 0.0;
  double energy = 0.0;
};

struct EnergyTable {
  std::vector<EnergyRow> rows;  ///< sorted by node count, then decreasing p
  bool all_positive = true;
  bool monotone_in_nodes = true;
};

EnergyTable energy_levels(const std::vector<SolutionProfile>& profiles);

struct NamedCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::string provenance;
  std::vector<NamedCheck> checks;

  void add(std::string name, double value, double tolerance, bool pass, std::string detail = {});
  bool all_pass() const;
  nlohmann::json to_json() const;
  /// name,value,tolerance,pass,detail with 17 significant digits.
  std::string to_csv() const;
};

}  // namespace hslab
