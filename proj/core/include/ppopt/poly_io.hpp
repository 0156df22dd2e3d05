#pragma once

#include <string_view>

#include "ppopt/polynomial.hpp"
#include "ppopt/rational_function.hpp"

namespace ppopt {

/// Parses the textual polynomial syntax: identifiers, integer and rational
/// literals (3, -1/10), operators + - * / ^ and parentheses; whitespace is
/// insignificant. Division is allowed only by constants in this context.
/// Decimal literals are rejected to keep coefficients exact.
QPolynomial parse_polynomial(std::string_view text, RingPtr ring);

/// Same grammar with unrestricted division; the result is a fraction of
/// polynomials over `param_ring`.
RationalFunction parse_rational_function(std::string_view text, RingPtr param_ring);

}  // namespace ppopt
