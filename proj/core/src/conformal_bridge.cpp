#include "hslab/conformal_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hslab/errors.hpp"
#include "radial_fem.hpp"

namespace hslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double leading_h_constant(const ProblemParams& p) {
  return 4.0 * (p.n - 2.0) / (p.n - 4.0) * p.gamma + 4.0 * p.lambda - p.n * (p.n - 2.0);
}

}  // namespace

double phi(double r, int n) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("phi: radius outside [0, 1)");
  return std::pow(2.0 / (1.0 - r * r), 0.5 * (n - 2));
}

double h_gamma_lambda(double r, const ProblemParams& p, const LowDimConstants& lowdim) {
  if (p.n >= 5) return leading_h_constant(p);
  if (!(r > 0.0 && r < 1.0)) throw DomainError("h_gamma_lambda: radius outside (0, 1)");
  if (p.n == 4) return 8.0 * p.gamma * std::log(1.0 / r) + lowdim.c4;
  return 4.0 * p.gamma / r + lowdim.c3;
}

double h_conformal_exact(double r, const ProblemParams& p) {
  const double rho = 2.0 / (1.0 - r * r);
  const double v2 = weight_V_p(r, p.n, 2.0);
  return rho * rho * (p.gamma * v2 + p.lambda - 0.25 * p.n * (p.n - 2.0)) - p.gamma / (r * r);
}

double b_weight_q(double r, int n, double s, double q) {
  const double V = weight_V_p(r, n, q);
  return std::pow(r, s) * V * std::pow(phi(r, n), sobolev_exponent(n) - q);
}

double b_weight(double r, int n, double s) { return b_weight_q(r, n, s, critical_exponent(n, s)); }

double b_at_origin(int n, double s) {
  return std::pow(n - 2.0, (2.0 - s) / (n - 2.0)) / std::pow(2.0, 2.0 - s);
}

RadialFunction to_euclidean(const RadialFunction& u, int n) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = phi(u.grid()[i], n) * u[i];
  return RadialFunction(u.grid(), std::move(v), u.interpolation_order());
}

RadialFunction to_hyperbolic(const RadialFunction& v, int n) {
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / phi(v.grid()[i], n);
  return RadialFunction(v.grid(), std::move(u), v.interpolation_order());
}

EuclideanProblem::EuclideanProblem(ProblemParams params, double radius, HSpec h, BSpec b,
                                   double b_scale)
    : params_(params), radius_(radius), h_(std::move(h)), b_(std::move(b)), b_scale_(b_scale) {
  params_.validate();
  if (!(radius > 0.0 && radius < 1.0)) throw DomainError("domain radius must lie in (0, 1)");
  if (!(b_scale > 0.0)) throw DomainError("b scale must be positive");
  if (const auto* cb = std::get_if<ConstantB>(&b_); cb && !(cb->b0 > 0.0))
    throw DomainError("constant b must be positive");
  if (const auto* ch = std::get_if<CustomH>(&h_); ch && !ch->h)
    throw DomainError("custom h needs an evaluator");
  exps_ = exponent_set(params_.n, params_.s, params_.gamma);
  if (std::holds_alternative<ConformalB>(b_))
    green_ = std::make_shared<const GreenTable>(params_.n, 1e-12 * radius_, radius_, 400.0);
}

double EuclideanProblem::h(double r) const {
  return std::visit(overloaded{
                        [&](const LeadingH& ph) { return h_gamma_lambda(r, params_, ph.lowdim); },
                        [](const ConstantH& c) { return c.value; },
                        [&](const CustomH& c) { return c.h(r); },
                    },
                    h_);
}

double EuclideanProblem::r_dh(double r) const {
  return std::visit(overloaded{
                        [&](const LeadingH&) {
                          if (params_.n >= 5) return 0.0;
                          if (params_.n == 4) return -8.0 * params_.gamma;
                          return -4.0 * params_.gamma / r;
                        },
                        [](const ConstantH&) { return 0.0; },
                        [&](const CustomH& c) {
                          if (c.r_dh) return c.r_dh(r);
                          const double d = 1e-4;
                          return (c.h(r * std::exp(d)) - c.h(r * std::exp(-d))) / (2.0 * d);
                        },
                    },
                    h_);
}

bool EuclideanProblem::h_is_constant() const noexcept {
  if (std::holds_alternative<ConstantH>(h_)) return true;
  return std::holds_alternative<LeadingH>(h_) && params_.n >= 5;
}

double EuclideanProblem::b(double r) const {
  if (const auto* cb = std::get_if<ConstantB>(&b_)) return b_scale_ * cb->b0;
  const int n = params_.n;
  const double q = exps_.two_star_s;
  const double V = green_->V(r, q);
  return b_scale_ * std::pow(r, params_.s) * V * std::pow(phi(r, n), sobolev_exponent(n) - q);
}

double EuclideanProblem::r_db(double r) const {
  if (std::holds_alternative<ConstantB>(b_)) return 0.0;
  const int n = params_.n;
  const double q = exps_.two_star_s;
  const double dlog = params_.s + green_->dlogV(r, q) +
                      (sobolev_exponent(n) - q) * (n - 2.0) * r * r / (1.0 - r * r);
  return b(r) * dlog;
}

double EuclideanProblem::b0() const {
  if (const auto* cb = std::get_if<ConstantB>(&b_)) return b_scale_ * cb->b0;
  return b_scale_ * b_at_origin(params_.n, params_.s);
}

std::pair<double, double> EuclideanProblem::leading_behaviour() const {
  return std::visit(overloaded{
                        [&](const LeadingH&) -> std::pair<double, double> {
                          if (params_.n >= 5) return {0.0, leading_h_constant(params_)};
                          if (params_.n == 3) return {1.0, 4.0 * params_.gamma};
                          return {0.0, std::numeric_limits<double>::quiet_NaN()};
                        },
                        [](const ConstantH& c) -> std::pair<double, double> {
                          return {0.0, c.value};
                        },
                        [](const CustomH& c) -> std::pair<double, double> {
                          return {c.theta, c.c};
                        },
                    },
                    h_);
}

double EuclideanProblem::leading_behaviour_error(double r0) const {
  const auto [theta, c] = leading_behaviour();
  if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double r = r0 * std::pow(10.0, k / 20.0);
    worst = std::max(worst, std::abs(std::pow(r, theta) * h(r) - c) / std::max(std::abs(c), 1.0));
  }
  return worst;
}

std::string EuclideanProblem::h_label() const {
  return std::visit(overloaded{
                        [](const LeadingH&) { return std::string("leading"); },
                        [](const ConstantH&) { return std::string("constant"); },
                        [](const CustomH& c) { return c.label; },
                    },
                    h_);
}

std::string EuclideanProblem::b_label() const {
  return std::holds_alternative<ConformalB>(b_) ? "conformal" : "constant";
}

EuclideanProblem EuclideanProblem::with_b_scale(double factor) const {
  EuclideanProblem copy = *this;
  if (!(factor > 0.0)) throw DomainError("b scale must be positive");
  copy.b_scale_ *= factor;
  return copy;
}

EuclideanProblem EuclideanProblem::with_defect(double p) const {
  EuclideanProblem copy = *this;
  copy.params_.p_defect = p;
  copy.params_.validate();
  return copy;
}

namespace {

struct FormEigen {
  double value;
  EigenpairResult pair;
};

FormEigen lambda0_on(const EuclideanProblem& problem, const RadialGrid& grid) {
  const auto& prm = problem.params();
  auto W = [&](double r) { return prm.gamma / (r * r) + problem.h(r); };
  RadialPencil p = assemble_radial_pencil(prm.n, grid, W);
  SymTridiag a = p.stiffness.shifted(1.0, p.potential);
  auto pair = smallest_generalized_eigenpair(a, p.stiffness);
  return {pair.value, std::move(pair)};
}

}  // namespace

Lambda0Result coercivity_lambda0(const EuclideanProblem& problem, const Lambda0Options& opts) {
  const double R = problem.radius();
  const auto grid =
      RadialGrid::with_density(opts.inner_fraction * R, R, opts.nodes_per_decade);
  Lambda0Result out;
  auto coarse = lambda0_on(problem, grid);
  out.coarse = coarse.value;
  out.iterations = coarse.pair.iterations;
  out.last_rayleigh = coarse.pair.last_rayleigh;
  out.converged = coarse.pair.converged;
  out.value = coarse.value;
  if (opts.richardson) {
    auto fine = lambda0_on(problem, grid.refined());
    out.fine = fine.value;
    out.iterations += fine.pair.iterations;
    out.last_rayleigh = fine.pair.last_rayleigh;
    out.converged = out.converged && fine.pair.converged;
    out.value = (4.0 * fine.value - coarse.value) / 3.0;
  } else {
    out.fine = coarse.value;
  }
  if (!out.converged)
    throw std::runtime_error("coercivity_lambda0: inverse iteration stalled at Rayleigh quotient " +
                             std::to_string(out.last_rayleigh));
  return out;
}

RadialEigenResult radial_dirichlet_eigen(int n, const RadialGrid& grid,
                                         const std::function<double(double)>& W) {
  RadialPencil p = assemble_radial_pencil(n, grid, W);
  SymTridiag a = p.stiffness.shifted(1.0, p.potential);
  auto pair = smallest_generalized_eigenpair(a, p.mass);
  RadialEigenResult out;
  out.value = pair.value;
  out.converged = pair.converged;
  out.last_rayleigh = pair.last_rayleigh;
  out.iterations = pair.iterations;
  std::vector<double> v(grid.size(), 0.0);
  std::copy(pair.vector.begin(), pair.vector.end(), v.begin());
  out.vector = RadialFunction(grid, std::move(v));
  return out;
}

EquivalenceReport residual_equivalence_check(const RadialFunction& u, const ProblemParams& prm) {
  const RadialGrid& grid = u.grid();
  grid.require_unit_ball();
  const int n = prm.n;
  const double q = critical_exponent(n, prm.s) - prm.p_defect;
  const double two_star = sobolev_exponent(n);
  const double dt = grid.log_step();
  const GreenTable green(n, grid.inner(), grid.outer(), 800.0);

  const RadialFunction v = to_euclidean(u, n);
  auto ut = uniform_derivative(u.values(), dt);
  auto utt = uniform_second_derivative(u.values(), dt);
  auto vt = uniform_derivative(v.values(), dt);
  auto vtt = uniform_second_derivative(v.values(), dt);

  EquivalenceReport rep;
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double rho = 2.0 / (1.0 - r * r);
    const double V2 = green.V(r, 2.0);
    const double Vq = green.V(r, q);
    const double ph = phi(r, n);

    const double du = ut[i] / r, d2u = (utt[i] - ut[i]) / (r * r);
    const double lap_b = (d2u + (n - 1) * du / r + (n - 2) * (2.0 * r / (1.0 - r * r)) * du) /
                         (rho * rho);
    const double nl_b = Vq * std::pow(std::abs(u[i]), q - 2.0) * u[i];
    const double res_b = -lap_b - prm.gamma * V2 * u[i] - prm.lambda * u[i] - nl_b;

    const double h = rho * rho * (prm.gamma * V2 + prm.lambda - 0.25 * n * (n - 2.0)) -
                     prm.gamma / (r * r);
    const double bq = std::pow(r, prm.s) * Vq * std::pow(ph, two_star - q);
    const double dv = vt[i] / r, d2v = (vtt[i] - vt[i]) / (r * r);
    const double lap_e = d2v + (n - 1) * dv / r;
    const double nl_e = bq * std::pow(std::abs(v[i]), q - 2.0) * v[i] / std::pow(r, prm.s);
    const double res_e = -lap_e - prm.gamma * v[i] / (r * r) - h * v[i] - nl_e;

    const double weight = std::pow(ph, two_star - 1.0);
    rep.max_difference = std::max(rep.max_difference, std::abs(res_e - weight * res_b));
    rep.max_hyperbolic_residual = std::max(rep.max_hyperbolic_residual, std::abs(res_b));
    rep.max_euclidean_residual = std::max(rep.max_euclidean_residual, std::abs(res_e));
    scale = std::max({scale, std::abs(lap_e), std::abs(h * v[i]), std::abs(nl_e),
                      std::abs(prm.gamma * v[i] / (r * r))});
  }
  rep.relative_difference = scale > 0.0 ? rep.max_difference / scale : 0.0;
  return rep;
}

}  // namespace hslab
