#pragma once

#include <string>
#include <vector>

#include "ppopt/poly_gcd.hpp"
#include "ppopt/polynomial.hpp"

namespace ppopt {

/// Element of the rational-function field over the parameter variables:
/// a fraction of two QPolynomials. The denominator is nonzero and monic
/// (grevlex-leading coefficient 1); common monomial factors are always
/// removed, and a full gcd pass runs once the combined degree passes
/// reduction_cap().
class RationalFunction {
public:
  RationalFunction() : RationalFunction(Rational(0)) {}
  RationalFunction(int v) : RationalFunction(Rational(v)) {}
  RationalFunction(long v) : RationalFunction(Rational(v)) {}
  explicit RationalFunction(Rational v);
  explicit RationalFunction(QPolynomial numerator);
  RationalFunction(QPolynomial numerator, QPolynomial denominator);

  static RationalFunction zero(RingPtr ring);
  static RationalFunction one(RingPtr ring);
  static RationalFunction variable(RingPtr ring, std::size_t index);

  /// Ring with no variables, shared by all "plain constant" values; such
  /// values combine with any ring.
  static const RingPtr& scalar_ring();

  const QPolynomial& num() const { return num_; }
  const QPolynomial& den() const { return den_; }
  const RingPtr& ring() const { return num_.ring(); }

  bool is_zero() const { return num_.is_zero(); }
  bool denominator_is_one() const;
  bool is_constant() const { return num_.is_constant() && denominator_is_one(); }
  /// Value as a rational; requires is_constant().
  Rational constant_value() const;

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction operator-() const;
  RationalFunction invert() const;

  /// Mathematical equality by cross-multiplication (representations may
  /// differ in reduction level).
  bool operator==(const RationalFunction& o) const;
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  /// Evaluates at a parameter point. Throws DenominatorVanishesError when
  /// |den(x)| <= tol_rel * (1 + max |den coefficient|).
  double specialize(const std::vector<double>& x, double tol_rel = 1e-12) const;

  /// Forces the full gcd pass regardless of the cap.
  RationalFunction reduced_full() const;

  /// Combined-total-degree threshold beyond which arithmetic results get a
  /// full gcd reduction. Affects size only, never values.
  static std::uint32_t reduction_cap();
  static void set_reduction_cap(std::uint32_t cap);

private:
  RationalFunction(QPolynomial num, QPolynomial den, bool already_normal);
  void normalize(bool force_full_gcd = false);
  static void align(RationalFunction& a, RationalFunction& b);

  QPolynomial num_;
  QPolynomial den_;
};

template <>
struct coeff_traits<RationalFunction> {
  static bool is_zero(const RationalFunction& c) { return c.is_zero(); }
  static bool is_one(const RationalFunction& c) {
    return c.is_constant() && ppopt::is_one(c.constant_value());
  }
  static bool is_negative(const RationalFunction& c) {
    return c.is_constant() && sgn(c.constant_value()) < 0;
  }
  static RationalFunction negate(const RationalFunction& c) { return -c; }
  static std::string str(const RationalFunction& c);
  static bool needs_parens(const RationalFunction& c) { return !c.is_constant(); }
};

using KPolynomial = Polynomial<RationalFunction>;

/// Serialized "(num)/(den)" form used by artifact files.
std::string to_fraction_string(const RationalFunction& r);

}  // namespace ppopt
