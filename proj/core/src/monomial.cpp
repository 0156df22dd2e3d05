#include "ppopt/monomial.hpp"

#include <algorithm>
#include <limits>

#include "ppopt/errors.hpp"

namespace ppopt {

Monomial::Monomial(std::vector<std::uint32_t> exponents) : exps_(std::move(exponents)) {
  for (auto e : exps_) degree_ += e;
}

Monomial Monomial::one(std::size_t nvars) {
  return Monomial(std::vector<std::uint32_t>(nvars, 0));
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, std::uint32_t power) {
  std::vector<std::uint32_t> e(nvars, 0);
  if (index >= nvars) throw Error("variable index out of range");
  e[index] = power;
  return Monomial(std::move(e));
}

bool Monomial::is_pure_power_of(std::size_t index) const {
  if (degree_ == 0) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i != index && exps_[i] != 0) return false;
  }
  return exps_[index] != 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (nvars() != o.nvars()) throw RingMismatchError("monomial arity mismatch");
  std::vector<std::uint32_t> e(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    std::uint64_t s = std::uint64_t(exps_[i]) + o.exps_[i];
    if (s > std::numeric_limits<std::uint32_t>::max()) throw Error("monomial exponent overflow");
    e[i] = static_cast<std::uint32_t>(s);
  }
  return Monomial(std::move(e));
}

bool Monomial::divides(const Monomial& o) const {
  if (nvars() != o.nvars()) throw RingMismatchError("monomial arity mismatch");
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > o.exps_[i]) return false;
  }
  return true;
}

Monomial Monomial::divide_into(const Monomial& o) const {
  if (!divides(o)) throw Error("monomial division is not exact");
  std::vector<std::uint32_t> e(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) e[i] = o.exps_[i] - exps_[i];
  return Monomial(std::move(e));
}

Monomial Monomial::lcm_with(const Monomial& o) const {
  if (nvars() != o.nvars()) throw RingMismatchError("monomial arity mismatch");
  std::vector<std::uint32_t> e(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) e[i] = std::max(exps_[i], o.exps_[i]);
  return Monomial(std::move(e));
}

bool Monomial::coprime_with(const Monomial& o) const {
  if (nvars() != o.nvars()) throw RingMismatchError("monomial arity mismatch");
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] != 0 && o.exps_[i] != 0) return false;
  }
  return true;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  const auto& ea = a.exponents();
  const auto& eb = b.exponents();
  for (std::size_t i = ea.size(); i-- > 0;) {
    if (ea[i] != eb[i]) return ea[i] > eb[i] ? -1 : 1;  // larger trailing exponent loses
  }
  return 0;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  if (a.nvars() != b.nvars()) throw RingMismatchError("monomial arity mismatch");
  if (!perm_ && kind_ == OrderKind::GradedReverseLex) return grevlex_compare(a, b);

  const std::size_t n = a.nvars();
  auto at = [&](const Monomial& m, std::size_t k) {
    return perm_ ? m.exp((*perm_)[k]) : m.exp(k);
  };
  switch (kind_) {
    case OrderKind::GradedReverseLex: {
      if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
      for (std::size_t k = n; k-- > 0;) {
        auto xa = at(a, k), xb = at(b, k);
        if (xa != xb) return xa > xb ? -1 : 1;
      }
      return 0;
    }
    case OrderKind::GradedLex:
      if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
      [[fallthrough]];
    case OrderKind::Lex: {
      for (std::size_t k = 0; k < n; ++k) {
        auto xa = at(a, k), xb = at(b, k);
        if (xa != xb) return xa < xb ? -1 : 1;
      }
      return 0;
    }
  }
  return 0;
}

std::string MonomialOrder::name() const {
  switch (kind_) {
    case OrderKind::GradedReverseLex: return "grevlex";
    case OrderKind::Lex: return "lex";
    case OrderKind::GradedLex: return "grlex";
  }
  return "grevlex";
}

MonomialOrder MonomialOrder::from_name(const std::string& name) {
  if (name == "grevlex") return grevlex();
  if (name == "lex") return lex();
  if (name == "grlex") return grlex();
  throw ParseError("unknown monomial order: '" + name + "'");
}

}  // namespace ppopt
