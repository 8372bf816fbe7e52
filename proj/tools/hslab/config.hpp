#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hslab/conformal_bridge.hpp"
#include "hslab/radial_solver.hpp"
#include "hslab/spectral_constants.hpp"

namespace hslab::cli {

/// Malformed configuration: unknown or missing key, wrong type, bad value.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double radius = 0.5;
  double nodes_per_decade = 200.0;
  double inner_fraction = 1e-5;
  int node_target = 0;
  std::string method = "shooting";  ///< shooting | variational
  double log10_K_min = -2.0;
  double log10_K_max = 14.0;
  double residual_tol = 1e-4;
  double b_scale = 1.0;
  std::vector<double> schedule{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.0};
  double limit_decades = 5.0;
};

struct OutputConfig {
  std::string directory = "hslab_out";
  bool csv = true;
  bool json = true;
};

struct InputConfig {
  std::vector<std::string> profiles;  ///< CSV paths; a sibling .json sidecar is read when present
  std::string run;                    ///< directory written by `continue`
  std::string direction = "to_euclidean";
};

struct SweepConfig {
  std::vector<double> gamma;
  std::vector<double> s;
  std::vector<double> lambda;
  std::vector<double> p;
  std::vector<int> node_target;
};

struct VerifyConfig {
  std::size_t hardy_samples = 100;
  std::size_t hardy_sobolev_samples = 200;
  double pohozaev_tolerance = 1e-4;
  double slope_tolerance = 0.02;
};

struct WeightsConfig {
  double r_min = 1e-4;
  double r_max = 0.99;
  double nodes_per_decade = 20.0;
  std::vector<double> p{2.0};
};

struct BlowupConfig {
  std::vector<double> fixture_mus{1e-4, 1e-2};
  std::optional<double> tau;
};

struct RunConfig {
  ProblemParams params;
  SolverConfig solver;
  OutputConfig output;
  InputConfig input;
  SweepConfig sweep;
  VerifyConfig verify;
  WeightsConfig weights;
  BlowupConfig blowup;

  ShootingOptions shooting_options() const;
  EuclideanProblem problem() const;
  /// Normalised form with every default filled in; its hash identifies a run.
  nlohmann::json to_json() const;
};

/// Parses a config document. Required: params.n, params.s, params.gamma,
/// params.lambda. Every other key is optional; unknown keys throw.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Throws AdmissibilityError unless the parameters admit a solve.
void validate_admissible(const ProblemParams& params);

}  // namespace hslab::cli
