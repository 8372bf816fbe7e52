#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hslab/conformal_bridge.hpp"
#include "hslab/grid.hpp"
#include "hslab/spectral_constants.hpp"

namespace hslab {

/// A radial solution v(r) with its derivative and bookkeeping.
struct SolutionProfile {
  RadialFunction v;
  RadialFunction dv;
  double K0 = 0.0;             ///< lim r^{beta_-} v(r)
  int node_count = 0;
  double p_defect = 0.0;
  double energy = 0.0;         ///< I_{p,gamma,h}(v)
  double residual_norm = 0.0;  ///< max node-wise relative equation residual
  double boundary_value = 0.0; ///< |v(R)| / max |v|
  double r0_shift = 0.0;       ///< relative change of v(R) when r0 is halved
  ProblemParams params;
  double radius = 0.0;         ///< domain radius (+inf for entire solutions)
  std::string method;
  bool converged = false;
};

/// Not-found verdict of a shooting search.
class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& what, std::vector<int> node_counts_seen)
      : std::runtime_error(what), seen_(std::move(node_counts_seen)) {}
  const std::vector<int>& node_counts_seen() const noexcept { return seen_; }

private:
  std::vector<int> seen_;
};

struct FrobeniusJet {
  double v = 0.0;
  double dv = 0.0;
  double w = 0.0;   ///< r^{beta_-} v
  double wt = 0.0;  ///< d w / d log r
};

/// Data at r0 from v ~ K r^{-beta_-} (1 + A r^{2-theta} + B r^sigma), the
/// first corrections of the h and nonlinear terms.
FrobeniusJet frobenius_init(const EuclideanProblem& problem, double K, double r0, double p);

/// Residual at r0 of the reduced equation
///   w_tt + 2 nu w_t + r^2 h w + b r^sigma |w|^{q-2} w = 0
/// evaluated on the jet.
double frobenius_jet_residual(const EuclideanProblem& problem, double K, double r0, double p);

struct ShootingOptions {
  double nodes_per_decade = 200.0;
  double inner_fraction = 1e-5;    ///< r0 = inner_fraction * R
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;          ///< scaled by |K|
  double log10_K_min = -2.0;
  double log10_K_max = 14.0;
  double scan_per_decade = 8.0;
  double boundary_tol = 1e-8;
  double overflow_factor = 1e12;
  double r0_shift_tol = 1e-8;
  double residual_tol = 1e-4;
  bool r0_self_check = true;
  std::optional<double> K_hint;    ///< warm start centre for the scan
};

struct ShotResult {
  RadialGrid grid;
  std::vector<double> w, wt;  ///< on grid nodes; shorter when diverged
  double K = 0.0;
  bool diverged = false;
  double last_radius = 0.0;
  double boundary_w = 0.0;    ///< w(R)
  int node_count = 0;         ///< sign changes strictly inside (r0, R)
};

/// Integrates outward from r0 on the beta_- branch with coefficient K.
ShotResult shoot(const EuclideanProblem& problem, double K, double p,
                 const ShootingOptions& opts = {});

/// Converts a finished shot to a profile (energy, residual, node count).
SolutionProfile profile_from_shot(const EuclideanProblem& problem, const ShotResult& shot, double p);

/// Finds K with v(R) = 0 and exactly node_target interior sign changes.
/// Throws SolverFailure when no bracket yields the target.
SolutionProfile solve_dirichlet_shooting(const EuclideanProblem& problem, double p, int node_target,
                                         const ShootingOptions& opts = {});

/// I(v) = omega int (v'^2/2 - gamma v^2/(2r^2) - h v^2/2 - b|v|^q/(q r^s)) r^{n-1} dr.
double profile_energy(const EuclideanProblem& problem, const RadialFunction& v,
                      const RadialFunction& dv, double p);

/// omega int b |v|^q / r^s r^{n-1} dr.
double nonlinear_mass(const EuclideanProblem& problem, const RadialFunction& v, double p);

/// omega int |v'|^2 r^{n-1} dr.
double dirichlet_norm_sq(const RadialFunction& dv, int n);

/// max over interior nodes of |equation residual| / max |term|.
double equation_residual(const EuclideanProblem& problem, const RadialFunction& v,
                         const RadialFunction& dv, double p);

struct ComparisonPair {
  RadialFunction H;        ///< -Delta H - gamma' H/r^2 - h H = 0, H(R) = 0
  RadialFunction eigen;    ///< first Dirichlet eigenfunction
  double eigenvalue = 0.0;
  double gamma_prime = 0.0;
  bool eigen_converged = false;
};

struct ComparisonOptions {
  double nodes_per_decade = 200.0;
  double inner_fraction = 1e-6;
};

/// H by backward integration from the boundary, normalised so that
/// r^{beta_+(gamma')} H -> 1 at the inner node; eigenpair by inverse iteration.
ComparisonPair comparison_pair(const EuclideanProblem& problem, double gamma_prime,
                               const ComparisonOptions& opts = {});

}  // namespace hslab
