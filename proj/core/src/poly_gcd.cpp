#include "ppopt/poly_gcd.hpp"

#include <algorithm>

namespace ppopt {

namespace {

using Term = QPolynomial::Term;

QPolynomial strip_monomial(const QPolynomial& p, const Monomial& m) {
  std::vector<Term> ts;
  ts.reserve(p.term_count());
  for (const auto& t : p.terms()) ts.push_back(Term{m.divide_into(t.mono), t.coeff});
  return QPolynomial::from_terms(p.ring(), std::move(ts));
}

std::uint32_t degree_in_var(const QPolynomial& p, std::size_t v) { return p.degree_in(v); }

/// Coefficient of v^k in p, as a polynomial of the same ring with the v
/// exponent removed.
QPolynomial coeff_of_power(const QPolynomial& p, std::size_t v, std::uint32_t k) {
  std::vector<Term> ts;
  for (const auto& t : p.terms()) {
    if (t.mono.exp(v) != k) continue;
    auto e = t.mono.exponents();
    e[v] = 0;
    ts.push_back(Term{Monomial(std::move(e)), t.coeff});
  }
  return QPolynomial::from_terms(p.ring(), std::move(ts));
}

QPolynomial leading_coeff_in(const QPolynomial& p, std::size_t v) {
  return coeff_of_power(p, v, degree_in_var(p, v));
}

QPolynomial times_var_power(const QPolynomial& p, std::size_t v, std::uint32_t k) {
  if (k == 0) return p;
  return p.times_term(Monomial::variable(p.ring()->size(), v, k), Rational(1));
}

/// Pseudo-remainder of a modulo b in variable v, scaled so that
/// lc_v(b)^(deg a - deg b + 1) * a = q*b + result holds exactly.
QPolynomial pseudo_rem(const QPolynomial& a, const QPolynomial& b, std::size_t v) {
  const std::uint32_t n = degree_in_var(b, v);
  QPolynomial lb = leading_coeff_in(b, v);
  QPolynomial r = a;
  std::int64_t e = std::int64_t(degree_in_var(a, v)) - n + 1;
  while (!r.is_zero() && degree_in_var(r, v) >= n) {
    const std::uint32_t dr = degree_in_var(r, v);
    QPolynomial lr = leading_coeff_in(r, v);
    r = (r * lb) - times_var_power(lr * b, v, dr - n);
    --e;
  }
  for (; e > 0; --e) r = r * lb;
  return r;
}

QPolynomial content_in(const QPolynomial& p, std::size_t v);

/// gcd of two polynomials that are integer-primitive with no monomial
/// content.
QPolynomial gcd_primitive(const QPolynomial& a, const QPolynomial& b) {
  if (a.is_constant() || b.is_constant()) {
    return QPolynomial::constant(a.ring(), Rational(1));
  }

  // main variable: common to both, smallest worst-case degree
  std::size_t best_var = a.ring()->size();
  std::uint32_t best_deg = 0;
  for (std::size_t v = 0; v < a.ring()->size(); ++v) {
    std::uint32_t da = degree_in_var(a, v), db = degree_in_var(b, v);
    if (da == 0 || db == 0) continue;
    std::uint32_t d = std::max(da, db);
    if (best_var == a.ring()->size() || d < best_deg) {
      best_var = v;
      best_deg = d;
    }
  }
  if (best_var == a.ring()->size()) {
    return QPolynomial::constant(a.ring(), Rational(1));  // disjoint variables
  }
  const std::size_t v = best_var;

  QPolynomial ca = content_in(a, v);
  QPolynomial cb = content_in(b, v);
  QPolynomial c = poly_gcd(ca, cb);
  auto pa = divide_exact(a, ca);
  auto pb = divide_exact(b, cb);
  if (!pa || !pb) return QPolynomial::constant(a.ring(), Rational(1));

  QPolynomial A = *pa, B = *pb;
  if (degree_in_var(A, v) < degree_in_var(B, v)) std::swap(A, B);

  // Brown's subresultant PRS
  QPolynomial g = QPolynomial::constant(a.ring(), Rational(1));
  QPolynomial h = g;
  while (true) {
    const std::int64_t d = std::int64_t(degree_in_var(A, v)) - degree_in_var(B, v);
    QPolynomial R = pseudo_rem(A, B, v);
    if (R.is_zero()) break;
    if (degree_in_var(R, v) == 0) {
      return c;  // gcd is free of v, and the inputs were primitive in v
    }
    A = B;
    QPolynomial divisor = g;
    for (std::int64_t i = 0; i < d; ++i) divisor = divisor * h;
    auto next = divide_exact(R, divisor);
    if (!next) return c;  // should not happen; degrade to the content part
    B = *next;
    g = leading_coeff_in(A, v);
    if (d > 0) {
      QPolynomial gd = g;
      for (std::int64_t i = 1; i < d; ++i) gd = gd * g;
      if (d == 1) {
        h = gd;
      } else {
        QPolynomial hd = h;
        for (std::int64_t i = 2; i < d; ++i) hd = hd * h;
        auto hh = divide_exact(gd, hd);
        h = hh ? *hh : gd;
      }
    }
  }

  auto cont = content_in(B, v);
  auto prim = divide_exact(B, cont);
  QPolynomial result = prim ? integer_primitive(*prim) : integer_primitive(B);
  return integer_primitive(c * result);
}

QPolynomial content_in(const QPolynomial& p, std::size_t v) {
  QPolynomial g = QPolynomial::zero(p.ring());
  const std::uint32_t d = degree_in_var(p, v);
  for (std::uint32_t k = 0; k <= d; ++k) {
    QPolynomial c = coeff_of_power(p, v, k);
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return QPolynomial::constant(p.ring(), Rational(1));
  }
  return g;
}

}  // namespace

Monomial monomial_content(const QPolynomial& p) {
  if (p.is_zero()) return Monomial::one(p.ring()->size());
  std::vector<std::uint32_t> m = p.terms().front().mono.exponents();
  for (const auto& t : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], t.mono.exp(i));
  }
  return Monomial(std::move(m));
}

Rational rational_content(const QPolynomial& p) {
  Rational g(0);
  for (const auto& t : p.terms()) g = rational_gcd(g, t.coeff);
  return g;
}

QPolynomial integer_primitive(const QPolynomial& p) {
  if (p.is_zero()) return p;
  Rational c = rational_content(p);
  if (sgn(p.terms().front().coeff) < 0) c = -c;
  return p.scaled(Rational(1) / c);
}

QPolynomial poly_gcd(const QPolynomial& a, const QPolynomial& b) {
  require_compatible(a.ring(), b.ring());
  if (a.is_zero()) return integer_primitive(b);
  if (b.is_zero()) return integer_primitive(a);

  Monomial ma = monomial_content(a), mb = monomial_content(b);
  std::vector<std::uint32_t> me(ma.nvars());
  for (std::size_t i = 0; i < me.size(); ++i) me[i] = std::min(ma.exp(i), mb.exp(i));
  Monomial mg(std::move(me));

  QPolynomial pa = integer_primitive(strip_monomial(a, ma));
  QPolynomial pb = integer_primitive(strip_monomial(b, mb));
  QPolynomial g = gcd_primitive(pa, pb);
  QPolynomial result = g.times_term(mg, Rational(1));
  return integer_primitive(result);
}

QPolynomial poly_lcm(const QPolynomial& a, const QPolynomial& b) {
  require_compatible(a.ring(), b.ring());
  if (a.is_zero() || b.is_zero()) return QPolynomial::zero(a.ring());
  QPolynomial g = poly_gcd(a, b);
  auto q = divide_exact(a, g);
  QPolynomial lcm = q ? (*q * b) : (a * b);
  return integer_primitive(lcm);
}

std::optional<QPolynomial> divide_exact(const QPolynomial& a, const QPolynomial& d) {
  require_compatible(a.ring(), d.ring());
  if (d.is_zero()) return std::nullopt;
  if (a.is_zero()) return a;
  const MonomialOrder ord = MonomialOrder::grevlex();
  const auto lead = d.leading_term(ord);
  QPolynomial q = QPolynomial::zero(a.ring());
  QPolynomial r = a;
  while (!r.is_zero()) {
    auto lt = r.leading_term(ord);
    if (!lead.mono.divides(lt.mono)) return std::nullopt;
    Monomial shift = lead.mono.divide_into(lt.mono);
    Rational factor = lt.coeff / lead.coeff;
    q = q + QPolynomial::from_terms(a.ring(), {Term{shift, factor}});
    r = r - d.times_term(shift, factor);
  }
  return q;
}

}  // namespace ppopt
