#include "ppopt/poly_io.hpp"

#include <cctype>
#include <limits>

#include "ppopt/errors.hpp"

namespace ppopt {

namespace {

enum class Tok { Ident, Integer, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  std::string value;

  explicit Lexer(std::string_view t) : text(t) { advance(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos) + " in '" + std::string(text) + "'");
  }

  void advance() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    value.clear();
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = text[pos];
    if (c == '.') fail("decimal literals are not supported; write exact rationals like 1/10");
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value += text[pos++];
      }
      if (pos < text.size() && text[pos] == '.') {
        fail("decimal literals are not supported; write exact rationals like 1/10");
      }
      tok = Tok::Integer;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
        value += text[pos++];
      }
      tok = Tok::Ident;
      return;
    }
    ++pos;
    switch (c) {
      case '+': tok = Tok::Plus; return;
      case '-': tok = Tok::Minus; return;
      case '*': tok = Tok::Star; return;
      case '/': tok = Tok::Slash; return;
      case '^': tok = Tok::Caret; return;
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
      default: --pos; fail(std::string("unexpected character '") + c + "'");
    }
  }
};

/// Unreduced fraction of polynomials; just enough arithmetic for parsing.
struct Fraction {
  QPolynomial num;
  QPolynomial den;

  static Fraction from_poly(QPolynomial p) {
    QPolynomial one = QPolynomial::constant(p.ring(), Rational(1));
    return Fraction{std::move(p), std::move(one)};
  }
  Fraction operator+(const Fraction& o) const {
    return Fraction{num * o.den + o.num * den, den * o.den};
  }
  Fraction operator-() const { return Fraction{-num, den}; }
  Fraction operator*(const Fraction& o) const { return Fraction{num * o.num, den * o.den}; }
  Fraction pow(std::uint32_t e) const { return Fraction{num.pow(e), den.pow(e)}; }
};

struct Parser {
  Lexer lex;
  RingPtr ring;

  Parser(std::string_view text, RingPtr r) : lex(text), ring(std::move(r)) {}

  Fraction parse() {
    Fraction f = expr();
    if (lex.tok != Tok::End) lex.fail("trailing input");
    return f;
  }

  Fraction expr() {
    Fraction acc = term();
    while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
      bool minus = lex.tok == Tok::Minus;
      lex.advance();
      Fraction rhs = term();
      acc = minus ? acc + (-rhs) : acc + rhs;
    }
    return acc;
  }

  Fraction term() {
    Fraction acc = unary();
    while (lex.tok == Tok::Star || lex.tok == Tok::Slash) {
      bool divide = lex.tok == Tok::Slash;
      lex.advance();
      Fraction rhs = unary();
      if (divide) {
        if (rhs.num.is_zero()) lex.fail("division by zero");
        acc = acc * Fraction{rhs.den, rhs.num};
      } else {
        acc = acc * rhs;
      }
    }
    return acc;
  }

  Fraction unary() {
    bool neg = false;
    while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
      if (lex.tok == Tok::Minus) neg = !neg;
      lex.advance();
    }
    Fraction f = power();
    return neg ? -f : f;
  }

  Fraction power() {
    Fraction base = atom();
    if (lex.tok == Tok::Caret) {
      lex.advance();
      if (lex.tok != Tok::Integer) lex.fail("exponent must be a non-negative integer literal");
      unsigned long long e = 0;
      for (char c : lex.value) {
        e = e * 10 + static_cast<unsigned>(c - '0');
        if (e > std::numeric_limits<std::uint32_t>::max()) lex.fail("exponent too large");
      }
      lex.advance();
      return base.pow(static_cast<std::uint32_t>(e));
    }
    return base;
  }

  Fraction atom() {
    switch (lex.tok) {
      case Tok::Integer: {
        Rational r = rational_from_string(lex.value);
        lex.advance();
        return Fraction::from_poly(QPolynomial::constant(ring, std::move(r)));
      }
      case Tok::Ident: {
        auto idx = ring->index_of(lex.value);
        if (!idx) lex.fail("unknown variable '" + lex.value + "'");
        lex.advance();
        return Fraction::from_poly(QPolynomial::variable(ring, *idx, Rational(1)));
      }
      case Tok::LParen: {
        lex.advance();
        Fraction f = expr();
        if (lex.tok != Tok::RParen) lex.fail("expected ')'");
        lex.advance();
        return f;
      }
      default:
        lex.fail("expected a value");
    }
  }
};

}  // namespace

QPolynomial parse_polynomial(std::string_view text, RingPtr ring) {
  Parser p(text, std::move(ring));
  Fraction f = p.parse();
  if (!f.den.is_constant() || f.den.is_zero()) {
    throw ParseError("division by a non-constant is not allowed in a polynomial: '" +
                     std::string(text) + "'");
  }
  Rational d = f.den.terms().empty() ? Rational(0) : f.den.terms().front().coeff;
  return f.num.scaled(Rational(1) / d);
}

RationalFunction parse_rational_function(std::string_view text, RingPtr param_ring) {
  Parser p(text, std::move(param_ring));
  Fraction f = p.parse();
  if (f.den.is_zero()) throw ParseError("zero denominator");
  return RationalFunction(std::move(f.num), std::move(f.den));
}

}  // namespace ppopt
