#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "ppopt/polynomial.hpp"
#include "ppopt/ring.hpp"

namespace ppopt {

/// One branch of the complementarity disjunction: bit i set means constraint
/// i is treated as an equality.
struct ActiveSet {
  std::uint32_t mask = 0;

  bool contains(std::size_t i) const { return (mask >> i) & 1u; }
  std::size_t count() const { return static_cast<std::size_t>(std::popcount(mask)); }
  std::vector<std::size_t> indices(std::size_t q) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < q; ++i) {
      if (contains(i)) r.push_back(i);
    }
    return r;
  }
  bool operator==(const ActiveSet& o) const { return mask == o.mask; }
};

/// min J(u, x)  s.t.  g_i(u, x) <= 0. Objective and constraints live in the
/// space's full ring and may not reference multiplier variables.
class ParametricProgram {
public:
  ParametricProgram(VariableSpace space, QPolynomial objective,
                    std::vector<QPolynomial> constraints);

  const VariableSpace& space() const { return space_; }
  const QPolynomial& objective() const { return objective_; }
  const std::vector<QPolynomial>& constraints() const { return constraints_; }
  std::size_t constraint_count() const { return constraints_.size(); }

private:
  VariableSpace space_;
  QPolynomial objective_;
  std::vector<QPolynomial> constraints_;
};

/// Convenience builder: generates multiplier names mu1..muq and parses the
/// polynomial strings over the resulting ring.
ParametricProgram make_program(const std::vector<std::string>& decision_vars,
                               const std::vector<std::string>& parameters,
                               const std::string& objective_text,
                               const std::vector<std::string>& constraint_texts);

/// All 2^q constraint activation patterns in increasing mask order.
std::vector<ActiveSet> enumerate_active_sets(std::size_t q, std::size_t cap = 20);

}  // namespace ppopt
