#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ppopt {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// An ordered list of variable names. Position in the list is the variable
/// index used by monomial exponent vectors; position 0 is the most
/// significant variable under the default orders.
class Ring {
public:
  static RingPtr make(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool same_as(const Ring& other) const { return names_ == other.names_; }

private:
  explicit Ring(std::vector<std::string> names);
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

bool compatible(const RingPtr& a, const RingPtr& b);
void require_compatible(const RingPtr& a, const RingPtr& b);

/// Declares the three variable groups of a parametric program: decision
/// variables, one multiplier per constraint, and parameters. Names must be
/// unique across groups; ordering is fixed at construction.
class VariableSpace {
public:
  VariableSpace(std::vector<std::string> decision,
                std::vector<std::string> multipliers,
                std::vector<std::string> parameters);

  std::size_t decision_count() const { return decision_.size(); }
  std::size_t multiplier_count() const { return multipliers_.size(); }
  std::size_t parameter_count() const { return parameters_.size(); }

  const std::vector<std::string>& decision_names() const { return decision_; }
  const std::vector<std::string>& multiplier_names() const { return multipliers_; }
  const std::vector<std::string>& parameter_names() const { return parameters_; }

  /// decision + multipliers + parameters, in that significance order.
  const RingPtr& full_ring() const { return full_; }
  const RingPtr& parameter_ring() const { return params_; }

  /// Ring of the unknowns of one active-set branch: all decision variables
  /// followed by the multipliers of the active constraints (bit i of the
  /// mask set means constraint i is active).
  RingPtr unknown_ring(std::uint32_t active_mask) const;
  std::vector<std::string> unknown_names(std::uint32_t active_mask) const;

  bool operator==(const VariableSpace& o) const {
    return decision_ == o.decision_ && multipliers_ == o.multipliers_ &&
           parameters_ == o.parameters_;
  }

private:
  std::vector<std::string> decision_, multipliers_, parameters_;
  RingPtr full_, params_;
};

}  // namespace ppopt
