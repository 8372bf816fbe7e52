#pragma once

// Closed forms and brute-force solvers that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// G(r) = int_r^1 (1 - t^2)^{n-2} / t^{n-1} dt for n = 3 and n = 5.
inline double green3(double r) { return (1.0 - r) * (1.0 - r) / r; }
inline double green5(double r) {
  return 16.0 / 3.0 + 1.0 / (3.0 * r * r * r) - 3.0 / r - 3.0 * r + r * r * r / 3.0;
}
inline double density(double r, int n) { return std::pow(1.0 - r * r, n - 2) / std::pow(r, n - 1); }

inline double weight5(double r, double p) {
  const double f = density(r, 5);
  return f * f * std::pow(1.0 - r * r, 2) / (36.0 * std::pow(green5(r), 0.5 * (p + 2.0)));
}

// Reduced weight r^s V_q phi^{2* - q} for n = 5; the problem's b uses q = 2*(s).
inline double b5(double r, double s, double q) {
  const double two_star = 10.0 / 3.0;
  const double phi = std::pow(2.0 / (1.0 - r * r), 1.5);
  return std::pow(r, s) * weight5(r, q) * std::pow(phi, two_star - q);
}

inline double sphere_area5() { return 8.0 * std::numbers::pi * std::numbers::pi / 3.0; }

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// Entire solution of -Delta u - gamma u/r^2 = b0 u^{2*(s)-1}/r^s with the
// maximiser of r^{(n-2)/2} u at `peak` and u(peak) = 1.
struct ExactBubble {
  int n;
  double s, beta_minus, beta_plus, peak;

  double operator()(double r) const {
    const double a = (2.0 - s) * beta_minus / (n - 2.0);
    const double b = (2.0 - s) * beta_plus / (n - 2.0);
    const double k = (n - 2.0) / (2.0 - s);
    const double x = r / peak;
    return std::pow(std::pow(x, a) + std::pow(x, b), -k) * std::pow(2.0, k);
  }
};

// Reduced ODE in t = log r for the reference problem (n = 5, constant h):
//   v_tt + (n-2) v_t + gamma v + r^2 h v + r^{2-s} b(r) |v|^{q-2} v = 0
// with b = b5(r, s, 2*(s)).
struct Shooter {
  double s = 1.0, gamma = -2.0, h = 1.0, q = 2.0, radius = 0.5;
  double r0 = 1e-7;
  int steps_per_decade = 4000;

  double beta_minus() const { return 1.5 - std::sqrt(2.25 - gamma); }
  double b(double r) const { return b5(r, s, 2.0 * (5.0 - s) / 3.0); }

  struct Path {
    std::vector<double> r, v, dv;  // dv = dv/dr
    bool crossed = false;
  };

  Path run(double K) const {
    const double t0 = std::log(r0), t1 = std::log(radius);
    const int steps = static_cast<int>(std::ceil((t1 - t0) / std::log(10.0) * steps_per_decade));
    const double dt = (t1 - t0) / steps;
    const double bm = beta_minus();
    auto rhs = [&](double t, double y, double yt, double& dy, double& dyt) {
      const double r = std::exp(t);
      dy = yt;
      dyt = -3.0 * yt - gamma * y - r * r * h * y -
            std::pow(r, 2.0 - s) * b(r) * std::pow(std::abs(y), q - 2.0) * y;
    };
    Path p;
    double y = K * std::pow(r0, -bm), yt = -bm * y;
    for (int i = 0; i <= steps; ++i) {
      const double t = t0 + i * dt, r = std::exp(t);
      p.r.push_back(r);
      p.v.push_back(y);
      p.dv.push_back(yt / r);
      if (i < steps && y < 0.0) p.crossed = true;
      if (i == steps) break;
      double k1, l1, k2, l2, k3, l3, k4, l4;
      rhs(t, y, yt, k1, l1);
      rhs(t + 0.5 * dt, y + 0.5 * dt * k1, yt + 0.5 * dt * l1, k2, l2);
      rhs(t + 0.5 * dt, y + 0.5 * dt * k2, yt + 0.5 * dt * l2, k3, l3);
      rhs(t + dt, y + dt * k3, yt + dt * l3, k4, l4);
      y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      yt += dt / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
    }
    return p;
  }

  // Ground state by bisection in log K between a positive and a crossing shot.
  double ground_state_K(double K_lo, double K_hi, int iterations = 80) const {
    for (int i = 0; i < iterations; ++i) {
      const double K = std::sqrt(K_lo * K_hi);
      const auto p = run(K);
      if (p.crossed || p.v.back() < 0.0) K_hi = K;
      else K_lo = K;
    }
    return std::sqrt(K_lo * K_hi);
  }

  double energy(const Path& p) const {
    // trapezoid in t on the uniform log grid
    const std::size_t m = p.r.size();
    const double dt = std::log(p.r[1] / p.r[0]);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = p.r[i], v = p.v[i], dv = p.dv[i];
      const double dens = 0.5 * dv * dv - 0.5 * gamma * v * v / (r * r) - 0.5 * h * v * v -
                          b(r) * std::pow(std::abs(v), q) / (q * std::pow(r, s));
      sum += (i == 0 || i + 1 == m ? 0.5 : 1.0) * dens * std::pow(r, 5);
    }
    return sphere_area5() * sum * dt;
  }
};

}  // namespace oracle
