#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

/// Argument outside the mathematical domain of an operation (r >= 1, g <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Parameters violate a strict admissibility inequality (e.g. gamma >= (n-2)^2/4).
class AdmissibilityError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature exhausted its panel budget. Carries the partial estimate.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

private:
  double estimate_;
  double error_;
};

/// A sampled function was asked for a value outside its grid support.
class ExtrapolationError : public std::out_of_range {
public:
  ExtrapolationError(const std::string& what, double radius)
      : std::out_of_range(what), radius_(radius) {}

  double radius() const noexcept { return radius_; }

private:
  double radius_;
};

}  // namespace hslab
