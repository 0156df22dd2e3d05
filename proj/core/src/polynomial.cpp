#include "ppopt/polynomial.hpp"

namespace ppopt {

namespace {
double int_pow(double base, std::uint32_t e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1u) r *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return r;
}
}  // namespace

double evaluate(const QPolynomial& p, const std::vector<double>& point) {
  if (point.size() != p.ring()->size()) throw Error("evaluate: wrong point dimension");
  double acc = 0.0;
  for (const auto& t : p.terms()) {
    double v = to_double(t.coeff);
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (t.mono.exp(i)) v *= int_pow(point[i], t.mono.exp(i));
    }
    acc += v;
  }
  return acc;
}

Rational evaluate_exact(const QPolynomial& p, const std::vector<Rational>& point) {
  if (point.size() != p.ring()->size()) throw Error("evaluate: wrong point dimension");
  Rational acc(0);
  for (const auto& t : p.terms()) {
    Rational v = t.coeff;
    for (std::size_t i = 0; i < point.size(); ++i) {
      for (std::uint32_t e = 0; e < t.mono.exp(i); ++e) v *= point[i];
    }
    acc += v;
  }
  return acc;
}

}  // namespace ppopt
