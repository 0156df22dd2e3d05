#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppopt/errors.hpp"
#include "ppopt/monomial.hpp"
#include "ppopt/rational.hpp"
#include "ppopt/ring.hpp"

namespace ppopt {

template <class C>
struct coeff_traits;  // is_zero / is_one / is_negative / negate / str / needs_parens

template <>
struct coeff_traits<Rational> {
  static bool is_zero(const Rational& c) { return sgn(c) == 0; }
  static bool is_one(const Rational& c) { return c == 1; }
  static bool is_negative(const Rational& c) { return sgn(c) < 0; }
  static Rational negate(const Rational& c) { return -c; }
  static std::string str(const Rational& c) { return to_string(c); }
  static bool needs_parens(const Rational&) { return false; }
};

/// Sparse multivariate polynomial over a coefficient field C. Terms are kept
/// sorted in descending plain-grevlex order with no zero coefficients, so two
/// polynomials are equal iff their term lists are equal.
template <class C>
class Polynomial {
public:
  struct Term {
    Monomial mono;
    C coeff;
  };

  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {
    if (!ring_) throw Error("polynomial requires a ring");
  }

  static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }

  static Polynomial constant(RingPtr ring, C value) {
    Polynomial p(std::move(ring));
    if (!coeff_traits<C>::is_zero(value)) {
      p.terms_.push_back(Term{Monomial::one(p.ring_->size()), std::move(value)});
    }
    return p;
  }

  static Polynomial variable(RingPtr ring, std::size_t index, C coeff) {
    Polynomial p(std::move(ring));
    if (!coeff_traits<C>::is_zero(coeff)) {
      p.terms_.push_back(Term{Monomial::variable(p.ring_->size(), index), std::move(coeff)});
    }
    return p;
  }

  /// Builds from arbitrary (monomial, coefficient) pairs; collects duplicates
  /// and drops zeros.
  static Polynomial from_terms(RingPtr ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    for (auto& t : terms) {
      if (t.mono.nvars() != p.ring_->size()) throw RingMismatchError("term arity mismatch");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grevlex_compare(a.mono, b.mono) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff = p.terms_.back().coeff + t.coeff;
      } else {
        p.terms_.push_back(std::move(t));
      }
    }
    p.strip_zeros();
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
  }

  /// -1 for the zero polynomial.
  std::int64_t degree() const {
    std::int64_t d = -1;
    for (const auto& t : terms_) d = std::max<std::int64_t>(d, t.mono.degree());
    return d;
  }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exp(var));
    return d;
  }

  const C* coefficient_of(const Monomial& m) const {
    for (const auto& t : terms_) {
      int cmp = grevlex_compare(t.mono, m);
      if (cmp == 0) return &t.coeff;
      if (cmp < 0) break;
    }
    return nullptr;
  }

  Term leading_term(const MonomialOrder& ord) const {
    if (terms_.empty()) throw Error("leading term of the zero polynomial");
    if (ord.is_plain_grevlex()) return terms_.front();
    std::size_t best = 0;
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      if (ord.greater(terms_[i].mono, terms_[best].mono)) best = i;
    }
    return terms_[best];
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coeff = coeff_traits<C>::negate(t.coeff);
    return r;
  }

  Polynomial operator+(const Polynomial& o) const {
    require_compatible(ring_, o.ring_);
    Polynomial r(ring_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
      int cmp = grevlex_compare(terms_[i].mono, o.terms_[j].mono);
      if (cmp > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (cmp < 0) {
        r.terms_.push_back(o.terms_[j++]);
      } else {
        C s = terms_[i].coeff + o.terms_[j].coeff;
        if (!coeff_traits<C>::is_zero(s)) r.terms_.push_back(Term{terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

  Polynomial operator*(const Polynomial& o) const {
    require_compatible(ring_, o.ring_);
    if (is_zero() || o.is_zero()) return zero(ring_);
    auto desc = [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) > 0; };
    std::map<Monomial, C, decltype(desc)> acc(desc);
    for (const auto& a : terms_) {
      for (const auto& b : o.terms_) {
        Monomial m = a.mono * b.mono;
        C prod = a.coeff * b.coeff;
        auto it = acc.find(m);
        if (it == acc.end()) {
          acc.emplace(std::move(m), std::move(prod));
        } else {
          it->second = it->second + prod;
        }
      }
    }
    Polynomial r(ring_);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc) {
      if (!coeff_traits<C>::is_zero(c)) r.terms_.push_back(Term{m, std::move(c)});
    }
    return r;
  }

  Polynomial scaled(const C& c) const {
    if (coeff_traits<C>::is_zero(c)) return zero(ring_);
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    r.strip_zeros();  // zero divisors cannot occur in a field, but stay safe
    return r;
  }

  /// Multiplies by c * m. Preserves term ordering (orders are multiplicative).
  Polynomial times_term(const Monomial& m, const C& c) const {
    if (coeff_traits<C>::is_zero(c)) return zero(ring_);
    Polynomial r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(Term{t.mono * m, t.coeff * c});
    return r;
  }

  Polynomial pow(std::uint32_t e) const {
    Polynomial base(*this);
    Polynomial r = constant_one();
    while (e > 0) {
      if (e & 1u) r = r * base;
      e >>= 1u;
      if (e) base = base * base;
    }
    return r;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial r(ring_);
    for (const auto& t : terms_) {
      std::uint32_t e = t.mono.exp(var);
      if (e == 0) continue;
      auto exps = t.mono.exponents();
      exps[var] = e - 1;
      C c = t.coeff * C(static_cast<long>(e));
      if (!coeff_traits<C>::is_zero(c)) r.terms_.push_back(Term{Monomial(std::move(exps)), std::move(c)});
    }
    // every surviving term drops exactly one power of var, so the relative
    // grevlex order is unchanged
    return r;
  }

  /// Maps every source variable to the image polynomial at its index;
  /// all images must share one target ring.
  Polynomial substitute(const std::vector<Polynomial>& images) const {
    if (images.size() != ring_->size()) throw Error("substitute: one image required per variable");
    RingPtr target = images.empty() ? ring_ : images[0].ring();
    for (const auto& im : images) require_compatible(target, im.ring());

    std::vector<std::vector<Polynomial>> powers(images.size());
    auto power_of = [&](std::size_t var, std::uint32_t e) -> const Polynomial& {
      auto& cache = powers[var];
      if (cache.empty()) cache.push_back(Polynomial::constant(target, C(1)));
      while (cache.size() <= e) cache.push_back(cache.back() * images[var]);
      return cache[e];
    };

    Polynomial result = zero(target);
    for (const auto& t : terms_) {
      Polynomial piece = Polynomial::constant(target, t.coeff);
      for (std::size_t v = 0; v < images.size(); ++v) {
        if (t.mono.exp(v) > 0) piece = piece * power_of(v, t.mono.exp(v));
      }
      result = result + piece;
    }
    return result;
  }

  /// Re-indexes variables into a (usually larger) ring. var_map[i] is the
  /// target index of source variable i.
  Polynomial embed(RingPtr target, const std::vector<std::size_t>& var_map) const {
    if (var_map.size() != ring_->size()) throw Error("embed: map size mismatch");
    Polynomial r(target);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      std::vector<std::uint32_t> e(target->size(), 0);
      for (std::size_t v = 0; v < var_map.size(); ++v) {
        if (var_map[v] >= target->size()) throw Error("embed: target index out of range");
        e[var_map[v]] += t.mono.exp(v);
      }
      r.terms_.push_back(Term{Monomial(std::move(e)), t.coeff});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& a, const Term& b) { return grevlex_compare(a.mono, b.mono) > 0; });
    return r;
  }

  bool operator==(const Polynomial& o) const {
    if (!compatible(ring_, o.ring_)) return false;
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].mono != o.terms_[i].mono) return false;
      if (!(terms_[i].coeff == o.terms_[i].coeff)) return false;
    }
    return true;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

private:
  Polynomial constant_one() const { return constant(ring_, C(1)); }

  void strip_zeros() {
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return coeff_traits<C>::is_zero(t.coeff); }),
                 terms_.end());
  }

  RingPtr ring_;
  std::vector<Term> terms_;
};

template <class C>
struct DivisionResult {
  std::vector<Polynomial<C>> quotients;  // one per basis element
  Polynomial<C> remainder;
};

/// Multivariate division: p = sum_i quotients[i] * basis[i] + remainder, with
/// no remainder term divisible by any basis leading monomial. The leading
/// term is always cancelled first, scanning basis elements in list order.
template <class C>
DivisionResult<C> reduce(const Polynomial<C>& p, const std::vector<Polynomial<C>>& basis,
                         const MonomialOrder& ord) {
  using Poly = Polynomial<C>;
  using Term = typename Poly::Term;

  std::vector<Term> lead;
  lead.reserve(basis.size());
  for (const auto& b : basis) {
    require_compatible(p.ring(), b.ring());
    if (b.is_zero()) throw ZeroDivisionError("division by the zero polynomial");
    lead.push_back(b.leading_term(ord));
  }

  DivisionResult<C> out{std::vector<Poly>(basis.size(), Poly::zero(p.ring())), Poly::zero(p.ring())};
  std::vector<Term> rem_terms;
  Poly work = p;
  while (!work.is_zero()) {
    Term lt = work.leading_term(ord);
    bool divided = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (lead[i].mono.divides(lt.mono)) {
        Monomial shift = lead[i].mono.divide_into(lt.mono);
        C factor = lt.coeff / lead[i].coeff;
        out.quotients[i] = out.quotients[i] + Poly::from_terms(p.ring(), {Term{shift, factor}});
        work = work - basis[i].times_term(shift, factor);
        divided = true;
        break;
      }
    }
    if (!divided) {
      rem_terms.push_back(lt);
      work = work - Poly::from_terms(p.ring(), {lt});
    }
  }
  out.remainder = Poly::from_terms(p.ring(), std::move(rem_terms));
  return out;
}

/// Remainder-only division, identical strategy to reduce().
template <class C>
Polynomial<C> reduce_remainder(const Polynomial<C>& p, const std::vector<Polynomial<C>>& basis,
                               const MonomialOrder& ord) {
  using Poly = Polynomial<C>;
  using Term = typename Poly::Term;
  std::vector<Term> lead;
  lead.reserve(basis.size());
  for (const auto& b : basis) {
    require_compatible(p.ring(), b.ring());
    if (b.is_zero()) throw ZeroDivisionError("division by the zero polynomial");
    lead.push_back(b.leading_term(ord));
  }
  std::vector<Term> rem_terms;
  Poly work = p;
  while (!work.is_zero()) {
    Term lt = work.leading_term(ord);
    bool divided = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (lead[i].mono.divides(lt.mono)) {
        Monomial shift = lead[i].mono.divide_into(lt.mono);
        C factor = lt.coeff / lead[i].coeff;
        work = work - basis[i].times_term(shift, factor);
        divided = true;
        break;
      }
    }
    if (!divided) {
      rem_terms.push_back(lt);
      work = work - Poly::from_terms(p.ring(), {lt});
    }
  }
  return Poly::from_terms(p.ring(), std::move(rem_terms));
}

using QPolynomial = Polynomial<Rational>;

/// Numeric evaluation with one value per ring variable.
double evaluate(const QPolynomial& p, const std::vector<double>& point);

/// Exact evaluation.
Rational evaluate_exact(const QPolynomial& p, const std::vector<Rational>& point);

template <class C>
std::string to_string(const Polynomial<C>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    C c = t.coeff;
    bool neg = coeff_traits<C>::is_negative(c);
    if (neg) c = coeff_traits<C>::negate(c);
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    std::string cs = coeff_traits<C>::str(c);
    bool coeff_is_one = coeff_traits<C>::is_one(c);
    std::string mono;
    bool first_var = true;
    for (std::size_t v = 0; v < t.mono.nvars(); ++v) {
      if (t.mono.exp(v) == 0) continue;
      if (!first_var) mono += "*";
      first_var = false;
      mono += p.ring()->name(v);
      if (t.mono.exp(v) > 1) mono += "^" + std::to_string(t.mono.exp(v));
    }
    if (mono.empty()) {
      out += coeff_traits<C>::needs_parens(c) ? "(" + cs + ")" : cs;
    } else if (coeff_is_one) {
      out += mono;
    } else if (coeff_traits<C>::needs_parens(c)) {
      out += "(" + cs + ")*" + mono;
    } else {
      out += cs + "*" + mono;
    }
  }
  return out;
}

}  // namespace ppopt
