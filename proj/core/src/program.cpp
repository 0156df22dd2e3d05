#include "ppopt/program.hpp"

#include "ppopt/errors.hpp"
#include "ppopt/poly_io.hpp"

namespace ppopt {

ParametricProgram::ParametricProgram(VariableSpace space, QPolynomial objective,
                                     std::vector<QPolynomial> constraints)
    : space_(std::move(space)), objective_(std::move(objective)),
      constraints_(std::move(constraints)) {
  require_compatible(space_.full_ring(), objective_.ring());
  for (const auto& g : constraints_) require_compatible(space_.full_ring(), g.ring());
  if (constraints_.size() != space_.multiplier_count()) {
    throw Error("constraint count does not match multiplier count");
  }
  const std::size_t m = space_.decision_count();
  for (std::size_t i = 0; i < space_.multiplier_count(); ++i) {
    const std::size_t idx = m + i;
    if (objective_.degree_in(idx) != 0) {
      throw Error("objective references multiplier " + space_.multiplier_names()[i]);
    }
    for (const auto& g : constraints_) {
      if (g.degree_in(idx) != 0) {
        throw Error("constraint references multiplier " + space_.multiplier_names()[i]);
      }
    }
  }
}

ParametricProgram make_program(const std::vector<std::string>& decision_vars,
                               const std::vector<std::string>& parameters,
                               const std::string& objective_text,
                               const std::vector<std::string>& constraint_texts) {
  std::vector<std::string> multipliers;
  multipliers.reserve(constraint_texts.size());
  for (std::size_t i = 0; i < constraint_texts.size(); ++i) {
    multipliers.push_back("mu" + std::to_string(i + 1));
  }
  VariableSpace space(decision_vars, multipliers, parameters);
  QPolynomial objective = parse_polynomial(objective_text, space.full_ring());
  std::vector<QPolynomial> constraints;
  constraints.reserve(constraint_texts.size());
  for (const auto& t : constraint_texts) {
    constraints.push_back(parse_polynomial(t, space.full_ring()));
  }
  return ParametricProgram(std::move(space), std::move(objective), std::move(constraints));
}

std::vector<ActiveSet> enumerate_active_sets(std::size_t q, std::size_t cap) {
  if (q > cap) {
    throw BudgetExceededError("active-set enumeration over " + std::to_string(q) +
                              " constraints exceeds the cap of " + std::to_string(cap));
  }
  std::vector<ActiveSet> out;
  const std::uint64_t total = 1ull << q;
  out.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    out.push_back(ActiveSet{static_cast<std::uint32_t>(mask)});
  }
  return out;
}

}  // namespace ppopt
