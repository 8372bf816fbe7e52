#include "hslab/variational.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/errors.hpp"
#include "hslab/hyperbolic_kernel.hpp"
#include "radial_fem.hpp"

namespace hslab {

namespace {

double sup_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SymTridiag form_matrix(const EuclideanProblem& pb, const RadialGrid& grid) {
  const auto& prm = pb.params();
  auto W = [&](double r) { return prm.gamma / (r * r) + pb.h(r); };
  const auto pencil = assemble_radial_pencil(prm.n, grid, W);
  return pencil.stiffness.shifted(1.0, pencil.potential);
}

}  // namespace

VariationalResult solve_variational(const EuclideanProblem& pb, double p,
                                    const VariationalOptions& opts) {
  const auto& prm = pb.params();
  const double q = pb.exponents().two_star_s - p;
  if (!(p >= 0.0) || !(q > 2.0)) throw AdmissibilityError("defect p must lie in [0, 2*(s) - 2)");
  if (!(opts.step > 0.0 && opts.step <= 1.0)) throw DomainError("variational step must lie in (0, 1]");

  const double R = pb.radius();
  const auto grid = RadialGrid::with_density(opts.inner_fraction * R, R, opts.nodes_per_decade);
  const std::size_t m = grid.size() - 1;
  const SymTridiag A = form_matrix(pb, grid);
  if (negative_inertia(A) != 0)
    throw AdmissibilityError("solve_variational: quadratic form is not coercive on this grid");

  std::vector<double> wb(m);
  for (std::size_t i = 0; i < m; ++i)
    wb[i] = lumped_weight(grid, i) * pb.b(grid[i]) * std::pow(grid[i], prm.n - prm.s);

  auto source = [&](const std::vector<double>& v) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = wb[i] * std::pow(std::abs(v[i]), q - 2.0) * v[i];
    return g;
  };
  auto nehari = [&](std::vector<double>& v) {
    const double a = A.quadratic_form(v);
    const double nl = dot(source(v), v);
    const double t = std::pow(a / nl, 1.0 / (q - 2.0));
    for (double& x : v) x *= t;
  };

  std::vector<double> mass(m);
  for (std::size_t i = 0; i < m; ++i) mass[i] = lumped_weight(grid, i) * std::pow(grid[i], prm.n);
  std::vector<double> v = solve_tridiagonal(A, mass);
  nehari(v);

  VariationalResult out;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const auto y = solve_tridiagonal(A, source(v));
    std::vector<double> next(m);
    for (std::size_t i = 0; i < m; ++i) next[i] = (1.0 - opts.step) * v[i] + opts.step * y[i];
    nehari(next);
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) change = std::max(change, std::abs(next[i] - v[i]));
    change /= sup_abs(next);
    v = std::move(next);
    out.iterations = it;
    out.last_change = change;
    if (change <= opts.tol) {
      out.converged = true;
      break;
    }
  }
  {
    const double a = A.quadratic_form(v);
    out.nehari_defect = std::abs(a - dot(source(v), v)) / a;
  }

  std::vector<double> full(grid.size(), 0.0);
  std::copy(v.begin(), v.end(), full.begin());
  auto dvt = uniform_derivative(full, grid.log_step());
  for (std::size_t i = 0; i < grid.size(); ++i) dvt[i] /= grid[i];

  SolutionProfile& prof = out.profile;
  prof.v = RadialFunction(grid, std::move(full));
  prof.dv = RadialFunction(grid, std::move(dvt));
  // the inner node carries the natural boundary condition; read K two decades in
  const auto ik = std::min<std::size_t>(grid.size() - 1,
                                        static_cast<std::size_t>(std::log(100.0) / grid.log_step()));
  prof.K0 = prof.v[ik] * std::pow(grid[ik], pb.exponents().beta_minus);
  prof.node_count = prof.v.sign_changes();
  prof.p_defect = p;
  prof.params = prm;
  prof.params.p_defect = p;
  prof.radius = R;
  prof.method = "variational";
  prof.energy = profile_energy(pb, prof.v, prof.dv, p);
  prof.residual_norm = equation_residual(pb, prof.v, prof.dv, p);
  prof.boundary_value = 0.0;
  prof.converged = out.converged;
  return out;
}

LinearSourceResult minimize_linear_source(const EuclideanProblem& pb, const RadialGrid& grid,
                                          const std::function<double(double)>& f, double tol,
                                          int max_iterations) {
  const auto& prm = pb.params();
  const std::size_t m = grid.size() - 1;
  auto W = [&](double r) { return prm.gamma / (r * r) + pb.h(r); };
  const auto pencil = assemble_radial_pencil(prm.n, grid, W);
  const SymTridiag A = pencil.stiffness.shifted(1.0, pencil.potential);

  std::vector<double> F(m);
  for (std::size_t i = 0; i < m; ++i) F[i] = lumped_weight(grid, i) * f(grid[i]) * std::pow(grid[i], prm.n);

  LinearSourceResult out;
  std::vector<double> direct = solve_tridiagonal(A, F);

  std::vector<double> v(m, 0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    const auto Av = A.apply(v);
    std::vector<double> res(m);
    for (std::size_t i = 0; i < m; ++i) res[i] = F[i] - Av[i];
    const auto z = solve_tridiagonal(pencil.stiffness, res);
    const double tau = dot(res, z) / A.quadratic_form(z);
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] += tau * z[i];
      change = std::max(change, std::abs(tau * z[i]));
    }
    out.iterations = it;
    if (change <= tol * sup_abs(v)) {
      out.converged = true;
      break;
    }
  }

  std::vector<double> a(grid.size(), 0.0), b(grid.size(), 0.0);
  std::copy(v.begin(), v.end(), a.begin());
  std::copy(direct.begin(), direct.end(), b.begin());
  out.descent = RadialFunction(grid, std::move(a));
  out.direct = RadialFunction(grid, std::move(b));
  return out;
}

}  // namespace hslab
