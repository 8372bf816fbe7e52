#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "hslab/radial_solver.hpp"

namespace hslab {

/// Header `r,v,dv`, one row per grid node, 17 significant digits.
void write_profile_csv(std::ostream& os, const SolutionProfile& profile);
std::string profile_csv(const SolutionProfile& profile);

/// Scalar bookkeeping of a profile (everything except the samples).
nlohmann::json profile_sidecar(const SolutionProfile& profile);

/// Parses the CSV schema above. The nodes must be log-uniform to 1e-9 relative;
/// throws std::runtime_error otherwise or on malformed rows.
SolutionProfile read_profile_csv(std::istream& is);
/// Restores the scalar fields written by profile_sidecar.
void apply_sidecar(SolutionProfile& profile, const nlohmann::json& sidecar);

nlohmann::json params_to_json(const ProblemParams& params);

}  // namespace hslab
