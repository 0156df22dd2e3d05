#include "ppopt/rational.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "ppopt/errors.hpp"

namespace ppopt {

double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rational_from_string(std::string_view s) {
  if (s.empty()) throw ParseError("empty rational literal");
  try {
    Rational r(std::string(s), 10);
    if (r.get_den() == 0) throw ParseError("zero denominator in rational literal");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed rational literal: '" + std::string(s) + "'");
  }
}

Rational rational_from_double(double v, double tol) {
  if (!std::isfinite(v)) throw ParseError("cannot convert non-finite value to rational");
  const double bound = tol * std::max(1.0, std::fabs(v));
  const bool neg = v < 0;
  double x = std::fabs(v);

  // Continued-fraction convergents p/q of x until within bound.
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int step = 0; step < 64; ++step) {
    double ipart = std::floor(frac);
    if (ipart > 9e18) break;
    mpz_class a(static_cast<long>(ipart));
    mpz_class p2 = a * p1 + p0;
    mpz_class q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational approx{p1, q1};
    approx.canonicalize();
    if (std::fabs(approx.get_d() - x) <= bound) {
      return neg ? Rational(-approx) : approx;
    }
    double rem = frac - ipart;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  Rational fallback{p1, q1};
  fallback.canonicalize();
  return neg ? Rational(-fallback) : fallback;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (is_zero(a)) return abs(b);
  if (is_zero(b)) return abs(a);
  mpz_class gn, ld;
  mpz_gcd(gn.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
  mpz_lcm(ld.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
  Rational g(gn, ld);
  g.canonicalize();
  return abs(g);
}

}  // namespace ppopt
