#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "subrad/constants.hpp"
#include "subrad/radii.hpp"

namespace subrad::io {

/// Malformed input (schema violation); carries the offending field path.
struct SpecError : std::runtime_error {
  std::string path;
  SpecError(std::string p, const std::string& msg)
      : std::runtime_error(p + ": " + msg), path(std::move(p)) {}
};

/// Base point infeasible (xbar not in D or g(xbar) not in K).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  sys::ConstraintSystem system;
  std::optional<perturb::PerturbationSpec> perturbation;
  constants::SolverConfig solver;
};

ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

nlohmann::ordered_json witness_to_json(const matrices::Witness& w);
nlohmann::ordered_json constants_to_json(const constants::ConstantsReport& rep);
nlohmann::ordered_json radii_to_json(const radii::RadiusReport& rep);

/// Flattens scalar leaves to "dotted.path,value" lines.
std::string to_csv(const nlohmann::ordered_json& j);

}  // namespace subrad::io
