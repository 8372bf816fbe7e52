#include "hslab/profile_io.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace hslab {

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

double parse_field(const std::string& s, std::size_t line) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error("profile csv: bad number '" + s + "' on line " + std::to_string(line));
  return x;
}

}  // namespace

void write_profile_csv(std::ostream& os, const SolutionProfile& profile) {
  const auto& g = profile.v.grid();
  os << "r,v,dv\n";
  std::ostringstream row;
  row << std::setprecision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    row.str("");
    row << g[i] << ',' << profile.v[i] << ',' << profile.dv[i] << '\n';
    os << row.str();
  }
}

std::string profile_csv(const SolutionProfile& profile) {
  std::ostringstream os;
  write_profile_csv(os, profile);
  return os.str();
}

nlohmann::json params_to_json(const ProblemParams& p) {
  return {{"n", p.n},          {"s", p.s},         {"gamma", p.gamma},          {"lambda", p.lambda},
          {"theta", p.theta},  {"c", p.c},         {"p_defect", p.p_defect}};
}

nlohmann::json profile_sidecar(const SolutionProfile& p) {
  nlohmann::json j;
  j["method"] = p.method;
  j["converged"] = p.converged;
  j["K0"] = number(p.K0);
  j["node_count"] = p.node_count;
  j["p_defect"] = number(p.p_defect);
  j["energy"] = number(p.energy);
  j["residual_norm"] = number(p.residual_norm);
  j["boundary_value"] = number(p.boundary_value);
  j["r0_shift"] = number(p.r0_shift);
  j["radius"] = number(p.radius);
  j["nodes"] = p.v.size();
  j["params"] = params_to_json(p.params);
  return j;
}

SolutionProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "r,v,dv")
    throw std::runtime_error("profile csv: expected header 'r,v,dv'");
  std::vector<double> r, v, dv;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      throw std::runtime_error("profile csv: expected 3 columns on line " + std::to_string(lineno));
    r.push_back(parse_field(line.substr(0, c1), lineno));
    v.push_back(parse_field(line.substr(c1 + 1, c2 - c1 - 1), lineno));
    dv.push_back(parse_field(line.substr(c2 + 1), lineno));
  }
  if (r.size() < 5) throw std::runtime_error("profile csv: fewer than 5 rows");
  const auto grid = RadialGrid::log_spaced(r.front(), r.back(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    if (std::abs(grid[i] - r[i]) > 1e-9 * r[i])
      throw std::runtime_error("profile csv: nodes are not log-uniform at row " + std::to_string(i + 1));
  SolutionProfile p;
  p.v = RadialFunction(grid, std::move(v));
  p.dv = RadialFunction(grid, std::move(dv));
  p.node_count = p.v.sign_changes();
  p.radius = grid.outer();
  return p;
}

void apply_sidecar(SolutionProfile& p, const nlohmann::json& j) {
  if (j.contains("method")) p.method = j.at("method").get<std::string>();
  if (j.contains("converged")) p.converged = j.at("converged").get<bool>();
  if (j.contains("K0")) p.K0 = read_number(j.at("K0"));
  if (j.contains("node_count")) p.node_count = j.at("node_count").get<int>();
  if (j.contains("p_defect")) p.p_defect = read_number(j.at("p_defect"));
  if (j.contains("energy")) p.energy = read_number(j.at("energy"));
  if (j.contains("residual_norm")) p.residual_norm = read_number(j.at("residual_norm"));
  if (j.contains("boundary_value")) p.boundary_value = read_number(j.at("boundary_value"));
  if (j.contains("r0_shift")) p.r0_shift = read_number(j.at("r0_shift"));
  if (j.contains("radius")) p.radius = read_number(j.at("radius"));
  if (j.contains("params")) {
    const auto& q = j.at("params");
    p.params.n = q.at("n").get<int>();
    p.params.s = q.at("s").get<double>();
    p.params.gamma = q.at("gamma").get<double>();
    p.params.lambda = q.at("lambda").get<double>();
    p.params.theta = q.at("theta").get<double>();
    p.params.c = q.at("c").get<double>();
    p.params.p_defect = q.at("p_defect").get<double>();
  }
}

}  // namespace hslab
