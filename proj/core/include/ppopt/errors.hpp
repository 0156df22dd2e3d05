#pragma once

#include <stdexcept>
#include <string>

namespace ppopt {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class RingMismatchError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class ZeroDivisionError : public Error {
public:
  using Error::Error;
};

/// Thrown when a rational function's denominator is numerically zero at the
/// requested parameter value.
class DenominatorVanishesError : public Error {
public:
  using Error::Error;
};

class NotZeroDimensionalError : public Error {
public:
  using Error::Error;
};

class BudgetExceededError : public Error {
public:
  using Error::Error;
};

class EigenConvergenceError : public Error {
public:
  using Error::Error;
};

class SpecializationError : public Error {
public:
  using Error::Error;
};

class NoFeasibleCandidateError : public Error {
public:
  using Error::Error;
};

class ArtifactError : public Error {
public:
  using Error::Error;
};

}  // namespace ppopt
