#pragma once

#include <optional>

#include "ppopt/polynomial.hpp"

namespace ppopt {

/// Componentwise-minimum exponent vector over all terms (the largest monomial
/// dividing every term). Zero polynomial yields the unit monomial.
Monomial monomial_content(const QPolynomial& p);

/// Non-negative gcd of all rational coefficients; 0 for the zero polynomial.
Rational rational_content(const QPolynomial& p);

/// Scales so coefficients are coprime integers and the grevlex-leading
/// coefficient is positive. Zero maps to zero.
QPolynomial integer_primitive(const QPolynomial& p);

/// Deterministic multivariate gcd: monomial + rational content extraction and
/// recursive subresultant pseudo-remainder sequences on a chosen main
/// variable. Result is integer-primitive with positive leading coefficient;
/// gcd(p, 0) = primitive p.
QPolynomial poly_gcd(const QPolynomial& a, const QPolynomial& b);

QPolynomial poly_lcm(const QPolynomial& a, const QPolynomial& b);

/// Quotient a / d when the division is exact, otherwise nullopt.
std::optional<QPolynomial> divide_exact(const QPolynomial& a, const QPolynomial& d);

}  // namespace ppopt
