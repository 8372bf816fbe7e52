#include "config.hpp"

#include <fstream>
#include <set>

#include "hslab/errors.hpp"

namespace hslab::cli {

namespace {

using nlohmann::json;

class Section {
public:
  Section(const json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
    for (const auto& [key, value] : obj_.items())
      if (!allowed.count(key)) throw ConfigError("unknown key '" + qualified(key) + "'");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& at(const std::string& key) const {
    if (!obj_.contains(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
    return obj_.at(key);
  }

  template <class T>
  void read(const std::string& key, T& out) const {
    if (!has(key)) return;
    out = convert<T>(obj_.at(key), key);
  }

  template <class T>
  void require(const std::string& key, T& out) const {
    out = convert<T>(at(key), key);
  }

  Section child(const std::string& key, std::set<std::string> allowed) const {
    return Section(obj_.at(key), qualified(key), std::move(allowed));
  }

private:
  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  T convert(const json& j, const std::string& key) const {
    if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw ConfigError("'" + qualified(key) + "' must be a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!j.is_number_integer()) throw ConfigError("'" + qualified(key) + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (j.get<long long>() < 0) throw ConfigError("'" + qualified(key) + "' must be non-negative");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw ConfigError("'" + qualified(key) + "' must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!j.is_string()) throw ConfigError("'" + qualified(key) + "' must be a string");
    } else {
      if (!j.is_array()) throw ConfigError("'" + qualified(key) + "' must be an array");
      T out;
      for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(convert<typename T::value_type>(j[i], key + "[" + std::to_string(i) + "]"));
      return out;
    }
    return j.get<T>();
  }

  const json& obj_;
  std::string path_;
};

void require_positive(double x, const std::string& key) {
  if (!(x > 0.0)) throw ConfigError("'" + key + "' must be positive");
}

}  // namespace

ShootingOptions RunConfig::shooting_options() const {
  ShootingOptions o;
  o.nodes_per_decade = solver.nodes_per_decade;
  o.inner_fraction = solver.inner_fraction;
  o.log10_K_min = solver.log10_K_min;
  o.log10_K_max = solver.log10_K_max;
  o.residual_tol = solver.residual_tol;
  return o;
}

EuclideanProblem RunConfig::problem() const {
  return EuclideanProblem(params, solver.radius, LeadingH{}, ConformalB{}, solver.b_scale);
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["params"] = {{"n", params.n},         {"s", params.s},   {"gamma", params.gamma},
                 {"lambda", params.lambda}, {"theta", params.theta}, {"c", params.c},
                 {"p_defect", params.p_defect}};
  j["solver"] = {{"radius", solver.radius},
                 {"nodes_per_decade", solver.nodes_per_decade},
                 {"inner_fraction", solver.inner_fraction},
                 {"node_target", solver.node_target},
                 {"method", solver.method},
                 {"log10_K_min", solver.log10_K_min},
                 {"log10_K_max", solver.log10_K_max},
                 {"residual_tol", solver.residual_tol},
                 {"b_scale", solver.b_scale},
                 {"schedule", solver.schedule},
                 {"limit_decades", solver.limit_decades}};
  j["output"] = {{"directory", output.directory}, {"csv", output.csv}, {"json", output.json}};
  j["input"] = {{"profiles", input.profiles}, {"run", input.run}, {"direction", input.direction}};
  j["sweep"] = {{"gamma", sweep.gamma},   {"s", sweep.s}, {"lambda", sweep.lambda},
                {"p", sweep.p},           {"node_target", sweep.node_target}};
  j["verify"] = {{"hardy_samples", verify.hardy_samples},
                 {"hardy_sobolev_samples", verify.hardy_sobolev_samples},
                 {"pohozaev_tolerance", verify.pohozaev_tolerance},
                 {"slope_tolerance", verify.slope_tolerance}};
  j["weights"] = {{"r_min", weights.r_min},
                  {"r_max", weights.r_max},
                  {"nodes_per_decade", weights.nodes_per_decade},
                  {"p", weights.p}};
  j["blowup"] = {{"fixture_mus", blowup.fixture_mus}};
  if (blowup.tau) j["blowup"]["tau"] = *blowup.tau;
  return j;
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  const Section root(doc, "",
                     {"params", "solver", "output", "input", "sweep", "verify", "weights", "blowup"});

  const auto params = root.child("params", {"n", "s", "gamma", "lambda", "theta", "c", "p_defect"});
  params.require("n", c.params.n);
  params.require("s", c.params.s);
  params.require("gamma", c.params.gamma);
  params.require("lambda", c.params.lambda);
  params.read("theta", c.params.theta);
  params.read("c", c.params.c);
  params.read("p_defect", c.params.p_defect);

  if (root.has("solver")) {
    const auto s = root.child("solver", {"radius", "nodes_per_decade", "inner_fraction", "node_target",
                                         "method", "log10_K_min", "log10_K_max", "residual_tol",
                                         "b_scale", "schedule", "limit_decades"});
    s.read("radius", c.solver.radius);
    s.read("nodes_per_decade", c.solver.nodes_per_decade);
    s.read("inner_fraction", c.solver.inner_fraction);
    s.read("node_target", c.solver.node_target);
    s.read("method", c.solver.method);
    s.read("log10_K_min", c.solver.log10_K_min);
    s.read("log10_K_max", c.solver.log10_K_max);
    s.read("residual_tol", c.solver.residual_tol);
    s.read("b_scale", c.solver.b_scale);
    s.read("schedule", c.solver.schedule);
    s.read("limit_decades", c.solver.limit_decades);
  }
  if (root.has("output")) {
    const auto s = root.child("output", {"directory", "csv", "json"});
    s.read("directory", c.output.directory);
    s.read("csv", c.output.csv);
    s.read("json", c.output.json);
  }
  if (root.has("input")) {
    const auto s = root.child("input", {"profiles", "run", "direction"});
    s.read("profiles", c.input.profiles);
    s.read("run", c.input.run);
    s.read("direction", c.input.direction);
  }
  if (root.has("sweep")) {
    const auto s = root.child("sweep", {"gamma", "s", "lambda", "p", "node_target"});
    s.read("gamma", c.sweep.gamma);
    s.read("s", c.sweep.s);
    s.read("lambda", c.sweep.lambda);
    s.read("p", c.sweep.p);
    s.read("node_target", c.sweep.node_target);
  }
  if (root.has("verify")) {
    const auto s = root.child("verify", {"hardy_samples", "hardy_sobolev_samples", "pohozaev_tolerance",
                                         "slope_tolerance"});
    s.read("hardy_samples", c.verify.hardy_samples);
    s.read("hardy_sobolev_samples", c.verify.hardy_sobolev_samples);
    s.read("pohozaev_tolerance", c.verify.pohozaev_tolerance);
    s.read("slope_tolerance", c.verify.slope_tolerance);
  }
  if (root.has("weights")) {
    const auto s = root.child("weights", {"r_min", "r_max", "nodes_per_decade", "p"});
    s.read("r_min", c.weights.r_min);
    s.read("r_max", c.weights.r_max);
    s.read("nodes_per_decade", c.weights.nodes_per_decade);
    s.read("p", c.weights.p);
  }
  if (root.has("blowup")) {
    const auto s = root.child("blowup", {"fixture_mus", "tau"});
    s.read("fixture_mus", c.blowup.fixture_mus);
    if (s.has("tau")) {
      double tau = 0.0;
      s.read("tau", tau);
      c.blowup.tau = tau;
    }
  }

  require_positive(c.solver.radius, "solver.radius");
  require_positive(c.solver.nodes_per_decade, "solver.nodes_per_decade");
  require_positive(c.solver.inner_fraction, "solver.inner_fraction");
  require_positive(c.solver.residual_tol, "solver.residual_tol");
  require_positive(c.solver.b_scale, "solver.b_scale");
  require_positive(c.solver.limit_decades, "solver.limit_decades");
  if (c.solver.inner_fraction >= 1.0) throw ConfigError("'solver.inner_fraction' must be below 1");
  if (c.solver.radius >= 1.0) throw ConfigError("'solver.radius' must be below 1");
  if (c.solver.node_target < 0) throw ConfigError("'solver.node_target' must be non-negative");
  if (c.solver.method != "shooting" && c.solver.method != "variational")
    throw ConfigError("'solver.method' must be 'shooting' or 'variational'");
  if (!(c.solver.log10_K_min < c.solver.log10_K_max))
    throw ConfigError("'solver.log10_K_min' must be below 'solver.log10_K_max'");
  if (c.input.direction != "to_euclidean" && c.input.direction != "to_hyperbolic")
    throw ConfigError("'input.direction' must be 'to_euclidean' or 'to_hyperbolic'");
  require_positive(c.weights.r_min, "weights.r_min");
  require_positive(c.weights.nodes_per_decade, "weights.nodes_per_decade");
  if (!(c.weights.r_min < c.weights.r_max && c.weights.r_max < 1.0))
    throw ConfigError("'weights' needs 0 < r_min < r_max < 1");
  for (double mu : c.blowup.fixture_mus) require_positive(mu, "blowup.fixture_mus");
  for (int k : c.sweep.node_target)
    if (k < 0) throw ConfigError("'sweep.node_target' entries must be non-negative");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

void validate_admissible(const ProblemParams& params) {
  params.validate();
  (void)exponent_set(params.n, params.s, params.gamma);
}

}  // namespace hslab::cli
