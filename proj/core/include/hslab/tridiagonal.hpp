#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hslab {

/// Symmetric tridiagonal matrix: main diagonal and first off-diagonal.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;  ///< size() == diag.size() - 1

  explicit SymTridiag(std::size_t n = 0) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  /// this - sigma * other
  SymTridiag shifted(double sigma, const SymTridiag& other) const;
};

/// Solves A x = rhs by the Thomas algorithm. Throws std::runtime_error on a
/// vanishing pivot.
std::vector<double> solve_tridiagonal(const SymTridiag& a, std::span<const double> rhs);

/// Number of negative pivots in the LDL^T factorisation of `a`, i.e. the
/// number of negative eigenvalues (Sylvester inertia).
std::size_t negative_inertia(const SymTridiag& a);

struct EigenpairResult {
  double value = 0.0;
  std::vector<double> vector;   ///< normalised to unit B-norm, positive at its largest entry
  double last_rayleigh = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct EigenOptions {
  double tol = 1e-13;
  int max_iterations = 200;
};

/// Smallest eigenvalue of the pencil A x = lambda B x (B positive definite) by
/// inverse power iteration. The shift is placed just below the smallest
/// eigenvalue, located first by inertia-count bisection so the iteration cannot
/// lock onto an interior eigenvalue.
EigenpairResult smallest_generalized_eigenpair(const SymTridiag& a, const SymTridiag& b,
                                               const EigenOptions& opts = {});

}  // namespace hslab
