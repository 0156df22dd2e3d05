#pragma once

#include <optional>
#include <string>

#include "ppopt/compiler.hpp"

namespace ppopt {

/// FNV-1a hash of the canonical program description (variables, objective,
/// constraints, order); used for artifact cache validation.
std::string program_hash(const ParametricProgram& program);

struct ProblemFile {
  ParametricProgram program;
  MonomialOrder order;
  std::optional<MpcMetadata> mpc;
};

/// Reads a problem description: either the flat form (decision_vars,
/// parameters, objective, constraints, order) or a control problem under an
/// "mpc" key, which is horizon-expanded on load.
ProblemFile load_problem_file(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

std::string artifact_to_string(const CompiledProblem& artifact);
void save_artifact(const CompiledProblem& artifact, const std::string& path);
CompiledProblem artifact_from_string(const std::string& text);
CompiledProblem load_artifact(const std::string& path);

std::string monomial_to_string(const Monomial& m, const Ring& ring);

}  // namespace ppopt
