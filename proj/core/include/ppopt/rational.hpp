#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ppopt {

// Exact arbitrary-precision rational. mpq_class keeps values canonical
// (positive denominator, coprime numerator/denominator, zero as 0/1).
using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_one(const Rational& r) { return r == 1; }

double to_double(const Rational& r);

/// Renders as "n" or "n/d".
std::string to_string(const Rational& r);

/// Parses "n" or "n/d"; throws ParseError on malformed input.
Rational rational_from_string(std::string_view s);

/// Nearest rational with |value - v| <= tol * max(1, |v|), found by
/// continued-fraction expansion. Exact for short decimal/binary values.
Rational rational_from_double(double v, double tol = 1e-12);

/// gcd of |a|, |b| as non-negative rationals: gcd(num)/lcm(den). gcd(0,0)=0.
Rational rational_gcd(const Rational& a, const Rational& b);

}  // namespace ppopt
