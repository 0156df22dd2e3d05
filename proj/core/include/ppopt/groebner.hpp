#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <type_traits>
#include <utility>
#include <vector>

#include "ppopt/poly_gcd.hpp"
#include "ppopt/polynomial.hpp"
#include "ppopt/rational_function.hpp"

namespace ppopt {

template <class C>
struct Ideal {
  std::vector<Polynomial<C>> generators;
};

template <class C>
class GroebnerBasis {
public:
  GroebnerBasis(std::vector<Polynomial<C>> elements, MonomialOrder order, bool reduced)
      : elements_(std::move(elements)), order_(std::move(order)), reduced_(reduced) {}

  const std::vector<Polynomial<C>>& elements() const { return elements_; }
  const MonomialOrder& order() const { return order_; }
  bool reduced() const { return reduced_; }

  bool trivial() const {
    return elements_.size() == 1 && elements_[0].is_constant() && !elements_[0].is_zero();
  }

private:
  std::vector<Polynomial<C>> elements_;
  MonomialOrder order_;
  bool reduced_;
};

struct BuchbergerOptions {
  /// Maximum number of S-pair treatments before aborting with
  /// BudgetExceededError.
  std::uint64_t max_pair_steps = 200000;
  /// Receives every parameter polynomial divided out during the computation
  /// (contents, cleared denominators, final leading coefficients). Those must
  /// not vanish when parameters are specialized.
  std::function<void(const QPolynomial&)> certificate_sink;
};

namespace gb_detail {

template <class C>
void sink_poly(const BuchbergerOptions& opts, const QPolynomial& p) {
  if (opts.certificate_sink && !p.is_constant()) opts.certificate_sink(p);
}

/// Embeds a (possibly scalar-ring) parameter polynomial into `pring`.
inline QPolynomial as_param_poly(const QPolynomial& p, const RingPtr& pring) {
  if (compatible(p.ring(), pring)) return p;
  if (p.ring()->size() == 0) {
    return QPolynomial::constant(pring, p.is_zero() ? Rational(0) : p.terms().front().coeff);
  }
  throw RingMismatchError("parameter polynomial in an unexpected ring");
}

inline RingPtr find_param_ring(const Polynomial<RationalFunction>& p) {
  for (const auto& t : p.terms()) {
    if (t.coeff.ring()->size() > 0) return t.coeff.ring();
  }
  return p.is_zero() ? RationalFunction::scalar_ring() : p.terms().front().coeff.ring();
}

/// Divides every coefficient numerator by g (exact by construction),
/// keeping denominators trivial.
inline Polynomial<RationalFunction> exact_div_coeffs(const Polynomial<RationalFunction>& p,
                                                     const QPolynomial& g) {
  using KTerm = Polynomial<RationalFunction>::Term;
  std::vector<KTerm> ts;
  ts.reserve(p.term_count());
  for (const auto& t : p.terms()) {
    QPolynomial n = as_param_poly(t.coeff.num(), g.ring());
    auto q = divide_exact(n, g);
    if (!q) throw Error("internal: content division was not exact");
    ts.push_back(KTerm{t.mono, RationalFunction(std::move(*q))});
  }
  return Polynomial<RationalFunction>::from_terms(p.ring(), std::move(ts));
}

/// Removes denominators and the polynomial + rational content from a
/// RationalFunction-coefficient polynomial, leaving coefficients as primitive
/// denominator-free fractions. Reports removed parameter polynomials.
inline void strip_content(Polynomial<RationalFunction>& p, const BuchbergerOptions& opts) {
  if (p.is_zero()) return;
  using KTerm = Polynomial<RationalFunction>::Term;
  RingPtr pring = find_param_ring(p);

  bool any_den = false;
  for (const auto& t : p.terms()) {
    if (!t.coeff.denominator_is_one()) {
      any_den = true;
      break;
    }
  }
  if (any_den) {
    QPolynomial den_lcm = QPolynomial::constant(pring, Rational(1));
    for (const auto& t : p.terms()) {
      if (!t.coeff.denominator_is_one()) {
        den_lcm = poly_lcm(den_lcm, as_param_poly(t.coeff.den(), pring));
      }
    }
    if (!den_lcm.is_constant()) sink_poly<RationalFunction>(opts, den_lcm);
    std::vector<KTerm> ts;
    ts.reserve(p.term_count());
    for (const auto& t : p.terms()) {
      QPolynomial factor = divide_exact(den_lcm, as_param_poly(t.coeff.den(), pring)).value();
      ts.push_back(KTerm{t.mono, RationalFunction(as_param_poly(t.coeff.num(), pring) * factor)});
    }
    p = Polynomial<RationalFunction>::from_terms(p.ring(), std::move(ts));
  }

  if (pring->size() > 0) {
    QPolynomial content = QPolynomial::zero(pring);
    for (const auto& t : p.terms()) {
      content = poly_gcd(content, as_param_poly(t.coeff.num(), pring));
      if (content.is_constant() && !content.is_zero()) break;
    }
    if (!content.is_constant() && !content.is_zero()) {
      sink_poly<RationalFunction>(opts, content);
      p = exact_div_coeffs(p, content);
    }
  }

  // rational normalization: coprime integer coefficients, positive lead
  Rational rc(0);
  for (const auto& t : p.terms()) rc = rational_gcd(rc, rational_content(t.coeff.num()));
  if (!ppopt::is_zero(rc)) {
    const auto& lead_num = p.terms().front().coeff.num();
    Rational sign_src = lead_num.is_zero() ? Rational(1) : lead_num.terms().front().coeff;
    if (sgn(sign_src) < 0) rc = -rc;
    if (!ppopt::is_one(rc)) p = p.scaled(RationalFunction(Rational(1) / rc));
  }
}

template <class C>
void normalize_element(Polynomial<C>& p, const MonomialOrder& ord, const BuchbergerOptions& opts) {
  if (p.is_zero()) return;
  if constexpr (std::is_same_v<C, RationalFunction>) {
    strip_content(p, opts);
    (void)ord;
  } else {
    (void)opts;
    C lc = p.leading_term(ord).coeff;
    p = p.scaled(C(1) / lc);
  }
}

/// Strips the common polynomial content of the pair (done, work) so the
/// running reduction stays a unit multiple of its mathematical value without
/// coefficient blow-up.
inline void joint_strip(Polynomial<RationalFunction>& done, Polynomial<RationalFunction>& work,
                        const BuchbergerOptions& opts) {
  RingPtr pring = find_param_ring(done);
  if (pring->size() == 0) pring = find_param_ring(work);
  if (pring->size() == 0) return;
  QPolynomial g = QPolynomial::zero(pring);
  auto acc = [&](const Polynomial<RationalFunction>& p) {
    for (const auto& t : p.terms()) {
      if (g.is_constant() && !g.is_zero()) return;
      g = poly_gcd(g, as_param_poly(t.coeff.num(), pring));
    }
  };
  acc(done);
  if (!(g.is_constant() && !g.is_zero())) acc(work);
  if (g.is_zero() || g.is_constant()) return;
  sink_poly<RationalFunction>(opts, g);
  if (!done.is_zero()) done = exact_div_coeffs(done, g);
  if (!work.is_zero()) work = exact_div_coeffs(work, g);
}

/// Full reduction of p modulo the basis. For rational-function coefficients
/// this is fraction-free: the result is a unit multiple of the normal form.
template <class C>
Polynomial<C> gb_reduce(const Polynomial<C>& p, const std::vector<Polynomial<C>>& basis,
                        const std::vector<typename Polynomial<C>::Term>& leads,
                        const MonomialOrder& ord, const BuchbergerOptions& opts) {
  using Poly = Polynomial<C>;
  using Term = typename Poly::Term;
  Poly done = Poly::zero(p.ring());
  Poly work = p;
  std::uint64_t steps = 0;
  while (!work.is_zero()) {
    Term lt = work.leading_term(ord);
    std::size_t hit = basis.size();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (leads[i].mono.divides(lt.mono)) {
        hit = i;
        break;
      }
    }
    if (hit == basis.size()) {
      done = done + Poly::from_terms(p.ring(), {lt});
      work = work - Poly::from_terms(p.ring(), {lt});
      continue;
    }
    Monomial shift = leads[hit].mono.divide_into(lt.mono);
    if constexpr (std::is_same_v<C, RationalFunction>) {
      // fraction-free step: work <- lc_g*work - c*(m/m_g)*g, done <- lc_g*done
      if (!coeff_traits<C>::is_one(leads[hit].coeff)) {
        work = work.scaled(leads[hit].coeff);
        done = done.scaled(leads[hit].coeff);
      }
      work = work - basis[hit].times_term(shift, lt.coeff);
      if (++steps % 8 == 0) joint_strip(done, work, opts);
    } else {
      work = work - basis[hit].times_term(shift, lt.coeff / leads[hit].coeff);
      ++steps;
    }
  }
  return done;
}

}  // namespace gb_detail

template <class C>
Polynomial<C> s_polynomial(const Polynomial<C>& f, const Polynomial<C>& g,
                           const MonomialOrder& ord) {
  auto lf = f.leading_term(ord);
  auto lg = g.leading_term(ord);
  Monomial l = lf.mono.lcm_with(lg.mono);
  return f.times_term(lf.mono.divide_into(l), lg.coeff) -
         g.times_term(lg.mono.divide_into(l), lf.coeff);
}

/// Buchberger's algorithm with the product and chain criteria and
/// minimal-lcm pair selection; the output is the unique reduced basis
/// (sorted by ascending leading monomial, leading coefficients 1).
template <class C>
GroebnerBasis<C> buchberger(const Ideal<C>& ideal, const MonomialOrder& ord,
                            const BuchbergerOptions& opts = {}) {
  using Poly = Polynomial<C>;
  using Term = typename Poly::Term;

  RingPtr ring;
  std::vector<Poly> basis;
  for (const auto& g : ideal.generators) {
    if (!ring) {
      ring = g.ring();
    } else {
      require_compatible(ring, g.ring());
    }
    if (g.is_zero()) continue;
    Poly p = g;
    gb_detail::normalize_element(p, ord, opts);
    basis.push_back(std::move(p));
  }
  if (!ring) throw Error("ideal has no usable generators");

  auto make_trivial = [&]() {
    return GroebnerBasis<C>({Poly::constant(ring, C(1))}, ord, true);
  };
  for (const auto& b : basis) {
    if (b.is_constant()) return make_trivial();
  }

  std::vector<Term> leads;
  leads.reserve(basis.size());
  for (const auto& b : basis) leads.push_back(b.leading_term(ord));

  struct PairKey {
    std::uint64_t deg;
    Monomial lcm;
    std::size_t i, j;
  };
  auto pair_less = [&ord](const PairKey& a, const PairKey& b) {
    if (a.deg != b.deg) return a.deg < b.deg;
    int c = ord.compare(a.lcm, b.lcm);
    if (c != 0) return c < 0;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  };
  std::set<PairKey, decltype(pair_less)> queue(pair_less);
  std::set<std::pair<std::size_t, std::size_t>> done_pairs;

  auto push_pairs_for = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      Monomial l = leads[k].mono.lcm_with(leads[n].mono);
      queue.insert(PairKey{l.degree(), std::move(l), k, n});
    }
  };
  for (std::size_t n = 1; n < basis.size(); ++n) push_pairs_for(n);

  std::uint64_t steps = 0;
  while (!queue.empty()) {
    PairKey pk = *queue.begin();
    queue.erase(queue.begin());
    done_pairs.insert({pk.i, pk.j});

    if (++steps > opts.max_pair_steps) {
      throw BudgetExceededError("Buchberger pair budget exceeded (" +
                                std::to_string(opts.max_pair_steps) + " steps)");
    }

    // product criterion
    if (leads[pk.i].mono.coprime_with(leads[pk.j].mono)) continue;
    // chain criterion
    bool chained = false;
    for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
      if (k == pk.i || k == pk.j) continue;
      if (!leads[k].mono.divides(pk.lcm)) continue;
      auto key1 = std::minmax(pk.i, k);
      auto key2 = std::minmax(pk.j, k);
      if (done_pairs.count({key1.first, key1.second}) &&
          done_pairs.count({key2.first, key2.second})) {
        chained = true;
      }
    }
    if (chained) continue;

    Poly s = s_polynomial(basis[pk.i], basis[pk.j], ord);
    Poly r = gb_detail::gb_reduce(s, basis, leads, ord, opts);
    if (r.is_zero()) continue;
    gb_detail::normalize_element(r, ord, opts);
    if (r.is_constant()) return make_trivial();
    basis.push_back(std::move(r));
    leads.push_back(basis.back().leading_term(ord));
    push_pairs_for(basis.size() - 1);
  }

  // minimal basis: drop elements whose leading monomial is divisible by
  // another element's leading monomial
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      if (leads[j].mono.divides(leads[i].mono)) {
        if (leads[i].mono == leads[j].mono) {
          redundant = j < i;  // keep the first of equal leading monomials
        } else {
          redundant = true;
        }
      }
    }
    if (!redundant) keep.push_back(i);
  }
  std::vector<Poly> minimal;
  minimal.reserve(keep.size());
  for (auto i : keep) minimal.push_back(basis[i]);

  // inter-reduce tails
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<Poly> others;
      std::vector<Term> other_leads;
      for (std::size_t j = 0; j < minimal.size(); ++j) {
        if (j == i) continue;
        others.push_back(minimal[j]);
        other_leads.push_back(minimal[j].leading_term(ord));
      }
      Poly r = gb_detail::gb_reduce(minimal[i], others, other_leads, ord, opts);
      gb_detail::normalize_element(r, ord, opts);
      if (!(r == minimal[i])) {
        minimal[i] = std::move(r);
        changed = true;
      }
    }
  }

  // monic form, deterministic order
  for (auto& e : minimal) {
    C lc = e.leading_term(ord).coeff;
    if constexpr (std::is_same_v<C, RationalFunction>) {
      if (!lc.denominator_is_one() || !lc.num().is_constant()) {
        gb_detail::sink_poly<C>(opts, lc.num());
        gb_detail::sink_poly<C>(opts, lc.den());
      }
    }
    e = e.scaled(C(1) / lc);
  }
  std::sort(minimal.begin(), minimal.end(), [&ord](const Poly& a, const Poly& b) {
    return ord.less(a.leading_term(ord).mono, b.leading_term(ord).mono);
  });
  return GroebnerBasis<C>(std::move(minimal), ord, true);
}

template <class C>
bool is_trivial(const GroebnerBasis<C>& gb) {
  return gb.trivial();
}

struct StandardBasis {
  std::vector<Monomial> monomials;  // ascending in the basis order
  std::size_t dimension = 0;
};

/// Enumerates the monomials not divisible by any leading monomial of the
/// (reduced, zero-dimensional) basis, sorted ascending.
template <class C>
StandardBasis standard_monomials(const GroebnerBasis<C>& gb) {
  StandardBasis out;
  if (gb.trivial()) return out;
  if (gb.elements().empty()) {
    throw NotZeroDimensionalError("the zero ideal is not zero-dimensional");
  }
  const auto& ord = gb.order();
  const std::size_t nvars = gb.elements().front().ring()->size();

  std::vector<Monomial> lms;
  lms.reserve(gb.elements().size());
  for (const auto& e : gb.elements()) lms.push_back(e.leading_term(ord).mono);

  std::vector<std::uint32_t> cap(nvars, 0);
  for (std::size_t v = 0; v < nvars; ++v) {
    bool found = false;
    for (const auto& m : lms) {
      if (m.is_pure_power_of(v)) {
        std::uint32_t e = m.exp(v);
        if (!found || e < cap[v]) cap[v] = e;
        found = true;
      }
    }
    if (!found) {
      throw NotZeroDimensionalError("no pure power of '" +
                                    gb.elements().front().ring()->name(v) +
                                    "' among leading monomials");
    }
  }

  std::uint64_t box = 1;
  for (auto c : cap) {
    box *= c;
    if (box > 200000) throw BudgetExceededError("standard monomial box too large");
  }

  std::vector<std::uint32_t> e(nvars, 0);
  while (true) {
    Monomial m{std::vector<std::uint32_t>(e)};
    bool standard = true;
    for (const auto& lm : lms) {
      if (lm.divides(m)) {
        standard = false;
        break;
      }
    }
    if (standard) out.monomials.push_back(std::move(m));
    // odometer over the box
    std::size_t v = 0;
    for (; v < nvars; ++v) {
      if (e[v] + 1 < cap[v]) {
        ++e[v];
        break;
      }
      e[v] = 0;
    }
    if (v == nvars) break;
  }
  std::sort(out.monomials.begin(), out.monomials.end(),
            [&ord](const Monomial& a, const Monomial& b) { return ord.less(a, b); });
  out.dimension = out.monomials.size();
  return out;
}

/// Dimension of the quotient ring = number of solutions counted with
/// multiplicity (the constant Hilbert polynomial of a zero-dimensional
/// ideal).
template <class C>
std::size_t solution_count(const GroebnerBasis<C>& gb) {
  return standard_monomials(gb).dimension;
}

/// The unique remainder modulo a reduced basis; idempotent.
template <class C>
Polynomial<C> normal_form(const Polynomial<C>& p, const GroebnerBasis<C>& gb) {
  if (gb.elements().empty()) return p;
  return reduce_remainder(p, gb.elements(), gb.order());
}

}  // namespace ppopt
