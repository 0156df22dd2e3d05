#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ppopt {

/// A power product, stored as one exponent per ring variable with the total
/// degree cached.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::vector<std::uint32_t> exponents);
  static Monomial one(std::size_t nvars);
  static Monomial variable(std::size_t nvars, std::size_t index, std::uint32_t power = 1);

  std::size_t nvars() const { return exps_.size(); }
  std::uint32_t exp(std::size_t i) const { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }
  std::uint64_t degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }

  /// True when the only nonzero exponent is at `index`.
  bool is_pure_power_of(std::size_t index) const;

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  /// Requires divides(o) in the caller; checked.
  Monomial divide_into(const Monomial& o) const;  // o / *this
  Monomial lcm_with(const Monomial& o) const;
  bool coprime_with(const Monomial& o) const;

  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

private:
  std::vector<std::uint32_t> exps_;
  std::uint64_t degree_ = 0;
};

enum class OrderKind { GradedReverseLex, Lex, GradedLex };

/// A monomial order: one of the three supported kinds plus an optional
/// variable permutation. perm[k] is the ring index of the k-th most
/// significant variable.
class MonomialOrder {
public:
  MonomialOrder() : kind_(OrderKind::GradedReverseLex) {}
  explicit MonomialOrder(OrderKind kind, std::optional<std::vector<std::size_t>> perm = std::nullopt)
      : kind_(kind), perm_(std::move(perm)) {}

  static MonomialOrder grevlex() { return MonomialOrder(OrderKind::GradedReverseLex); }
  static MonomialOrder lex() { return MonomialOrder(OrderKind::Lex); }
  static MonomialOrder grlex() { return MonomialOrder(OrderKind::GradedLex); }

  OrderKind kind() const { return kind_; }
  const std::optional<std::vector<std::size_t>>& permutation() const { return perm_; }

  /// <0, 0, >0 as a is below, equal to, above b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  bool is_plain_grevlex() const { return kind_ == OrderKind::GradedReverseLex && !perm_; }

  bool operator==(const MonomialOrder& o) const { return kind_ == o.kind_ && perm_ == o.perm_; }

  std::string name() const;
  static MonomialOrder from_name(const std::string& name);

private:
  OrderKind kind_;
  std::optional<std::vector<std::size_t>> perm_;
};

/// The fixed comparison used for canonical term storage (plain grevlex).
int grevlex_compare(const Monomial& a, const Monomial& b);

}  // namespace ppopt
