#include "ppopt/rational_function.hpp"

#include <atomic>
#include <cmath>

#include "ppopt/errors.hpp"

namespace ppopt {

namespace {
std::atomic<std::uint32_t> g_reduction_cap{12};
}

const RingPtr& RationalFunction::scalar_ring() {
  static RingPtr ring = Ring::make({});
  return ring;
}

RationalFunction::RationalFunction(Rational v)
    : num_(QPolynomial::constant(scalar_ring(), std::move(v))),
      den_(QPolynomial::constant(scalar_ring(), Rational(1))) {}

RationalFunction::RationalFunction(QPolynomial numerator)
    : num_(std::move(numerator)), den_(QPolynomial::constant(num_.ring(), Rational(1))) {}

RationalFunction::RationalFunction(QPolynomial numerator, QPolynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  require_compatible(num_.ring(), den_.ring());
  if (den_.is_zero()) throw ZeroDivisionError("rational function with zero denominator");
  normalize();
}

RationalFunction::RationalFunction(QPolynomial num, QPolynomial den, bool)
    : num_(std::move(num)), den_(std::move(den)) {}

RationalFunction RationalFunction::zero(RingPtr ring) {
  return RationalFunction(QPolynomial::zero(std::move(ring)));
}

RationalFunction RationalFunction::one(RingPtr ring) {
  return RationalFunction(QPolynomial::constant(std::move(ring), Rational(1)));
}

RationalFunction RationalFunction::variable(RingPtr ring, std::size_t index) {
  return RationalFunction(QPolynomial::variable(std::move(ring), index, Rational(1)));
}

bool RationalFunction::denominator_is_one() const {
  return den_.is_constant() && !den_.is_zero() && ppopt::is_one(den_.terms().front().coeff);
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw Error("rational function is not constant");
  return num_.is_zero() ? Rational(0) : num_.terms().front().coeff;
}

void RationalFunction::normalize(bool force_full_gcd) {
  if (num_.is_zero()) {
    den_ = QPolynomial::constant(num_.ring(), Rational(1));
    return;
  }
  // shared monomial factor
  Monomial mn = monomial_content(num_);
  Monomial md = monomial_content(den_);
  std::vector<std::uint32_t> shared(mn.nvars());
  bool any = false;
  for (std::size_t i = 0; i < shared.size(); ++i) {
    shared[i] = std::min(mn.exp(i), md.exp(i));
    any = any || shared[i] > 0;
  }
  if (any) {
    Monomial m(std::move(shared));
    auto strip = [&m](const QPolynomial& p) {
      std::vector<QPolynomial::Term> ts;
      ts.reserve(p.term_count());
      for (const auto& t : p.terms()) ts.push_back({m.divide_into(t.mono), t.coeff});
      return QPolynomial::from_terms(p.ring(), std::move(ts));
    };
    num_ = strip(num_);
    den_ = strip(den_);
  }

  const bool above_cap =
      num_.degree() + den_.degree() > static_cast<std::int64_t>(reduction_cap());
  if ((force_full_gcd || above_cap) && !den_.is_constant()) {
    QPolynomial g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      auto qn = divide_exact(num_, g);
      auto qd = divide_exact(den_, g);
      if (qn && qd) {
        num_ = std::move(*qn);
        den_ = std::move(*qd);
      }
    }
  }

  Rational lc = den_.leading_term(MonomialOrder::grevlex()).coeff;
  if (!ppopt::is_one(lc)) {
    Rational inv = Rational(1) / lc;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

void RationalFunction::align(RationalFunction& a, RationalFunction& b) {
  if (compatible(a.ring(), b.ring())) return;
  auto promote = [](RationalFunction& c, const RingPtr& target) {
    Rational v = c.constant_value();
    c.num_ = QPolynomial::constant(target, std::move(v));
    c.den_ = QPolynomial::constant(target, Rational(1));
  };
  if (a.ring()->size() == 0 && a.is_constant()) {
    promote(a, b.ring());
  } else if (b.ring()->size() == 0 && b.is_constant()) {
    promote(b, a.ring());
  } else {
    throw RingMismatchError("rational functions belong to different parameter rings");
  }
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  RationalFunction a = *this, b = o;
  align(a, b);
  if (a.denominator_is_one() && b.denominator_is_one()) {
    return RationalFunction(a.num_ + b.num_);
  }
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  RationalFunction a = *this, b = o;
  align(a, b);
  if (a.denominator_is_one() && b.denominator_is_one()) {
    return RationalFunction(a.num_ * b.num_);
  }
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  return *this * o.invert();
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::invert() const {
  if (is_zero()) throw ZeroDivisionError("inverting the zero rational function");
  return RationalFunction(den_, num_);
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  RationalFunction a = *this, b = o;
  if (!compatible(a.ring(), b.ring())) {
    if ((a.ring()->size() == 0 && a.is_constant()) || (b.ring()->size() == 0 && b.is_constant())) {
      align(a, b);
    } else {
      return false;
    }
  }
  return a.num_ * b.den_ == b.num_ * a.den_;
}

double RationalFunction::specialize(const std::vector<double>& x, double tol_rel) const {
  if (ring()->size() == 0 && !x.empty()) {
    // plain constant: the parameter value is irrelevant
    return specialize({}, tol_rel);
  }
  double dv = evaluate(den_, x);
  double scale = 0.0;
  for (const auto& t : den_.terms()) scale = std::max(scale, std::fabs(to_double(t.coeff)));
  if (std::fabs(dv) <= tol_rel * (1.0 + scale)) {
    throw DenominatorVanishesError("denominator vanishes at the given parameter value");
  }
  return evaluate(num_, x) / dv;
}

RationalFunction RationalFunction::reduced_full() const {
  RationalFunction r = *this;
  r.normalize(/*force_full_gcd=*/true);
  return r;
}

std::uint32_t RationalFunction::reduction_cap() { return g_reduction_cap.load(); }
void RationalFunction::set_reduction_cap(std::uint32_t cap) { g_reduction_cap.store(cap); }

std::string coeff_traits<RationalFunction>::str(const RationalFunction& c) {
  if (c.is_constant()) return ppopt::to_string(c.constant_value());
  if (c.denominator_is_one()) return to_string(c.num());
  return "(" + to_string(c.num()) + ")/(" + to_string(c.den()) + ")";
}

std::string to_fraction_string(const RationalFunction& r) {
  return "(" + to_string(r.num()) + ")/(" + to_string(r.den()) + ")";
}

}  // namespace ppopt
