#include "ppopt/ring.hpp"

#include <set>

#include "ppopt/errors.hpp"

namespace ppopt {

Ring::Ring(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw Error("empty variable name");
    auto [it, inserted] = index_.emplace(names_[i], i);
    (void)it;
    if (!inserted) throw Error("duplicate variable name: " + names_[i]);
  }
}

RingPtr Ring::make(std::vector<std::string> names) {
  return RingPtr(new Ring(std::move(names)));
}

std::optional<std::size_t> Ring::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool compatible(const RingPtr& a, const RingPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_as(*b);
}

void require_compatible(const RingPtr& a, const RingPtr& b) {
  if (!compatible(a, b)) throw RingMismatchError("polynomials belong to different rings");
}

VariableSpace::VariableSpace(std::vector<std::string> decision,
                             std::vector<std::string> multipliers,
                             std::vector<std::string> parameters)
    : decision_(std::move(decision)),
      multipliers_(std::move(multipliers)),
      parameters_(std::move(parameters)) {
  std::vector<std::string> all;
  all.reserve(decision_.size() + multipliers_.size() + parameters_.size());
  for (const auto& v : decision_) all.push_back(v);
  for (const auto& v : multipliers_) all.push_back(v);
  for (const auto& v : parameters_) all.push_back(v);
  full_ = Ring::make(all);  // rejects duplicates across the three groups
  params_ = Ring::make(parameters_);
}

RingPtr VariableSpace::unknown_ring(std::uint32_t active_mask) const {
  return Ring::make(unknown_names(active_mask));
}

std::vector<std::string> VariableSpace::unknown_names(std::uint32_t active_mask) const {
  std::vector<std::string> names = decision_;
  for (std::size_t i = 0; i < multipliers_.size(); ++i) {
    if (active_mask & (1u << i)) names.push_back(multipliers_[i]);
  }
  return names;
}

}  // namespace ppopt
