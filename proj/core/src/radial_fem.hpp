#pragma once

#include <cmath>
#include <functional>

#include "hslab/grid.hpp"
#include "hslab/tridiagonal.hpp"

namespace hslab {

/// P1 elements in t = log r for radial forms with the r^{n-1} dr measure.
struct RadialPencil {
  SymTridiag stiffness;  ///< int v_t^2 r^{n-2} dt, exact per element
  SymTridiag potential;  ///< lumped int W r^2 v^2 r^{n-2} dt
  SymTridiag mass;       ///< lumped int v^2 r^n dt
};

/// Unknowns are all nodes but the outer one, which carries the Dirichlet
/// condition; the inner node has a natural condition.
inline RadialPencil assemble_radial_pencil(int n, const RadialGrid& grid,
                                           const std::function<double(double)>& W) {
  const std::size_t m = grid.size() - 1;
  RadialPencil p{SymTridiag(m), SymTridiag(m), SymTridiag(m)};
  const double dt = grid.log_step();
  const double k = n - 2.0;
  for (std::size_t e = 0; e + 1 < grid.size(); ++e) {
    const double ta = grid.log_node(e), tb = grid.log_node(e + 1);
    const double ke = (std::exp(k * tb) - std::exp(k * ta)) / (k * dt * dt);
    p.stiffness.diag[e] += ke;
    if (e + 1 < m) {
      p.stiffness.diag[e + 1] += ke;
      p.stiffness.off[e] -= ke;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double r = grid[i];
    const double w = i == 0 ? 0.5 * dt : dt;
    p.potential.diag[i] = w * W(r) * std::pow(r, n);
    p.mass.diag[i] = w * std::pow(r, n);
  }
  return p;
}

/// Trapezoid weights in t matching the lumped mass (outer node included).
inline double lumped_weight(const RadialGrid& grid, std::size_t i) {
  const double dt = grid.log_step();
  return (i == 0 || i + 1 == grid.size()) ? 0.5 * dt : dt;
}

}  // namespace hslab
