#pragma once

#include <stdexcept>
#include <string>

namespace proxcalc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Arithmetic that would leave the proper extended reals (-inf, inf - inf, NaN).
class ExtendedArithmeticError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConjugate : public Error {
 public:
  using Error::Error;
};

class EmptySubdifferential : public Error {
 public:
  using Error::Error;
};

class SolverDidNotConverge : public Error {
 public:
  using Error::Error;
};

class AllInfinite : public Error {
 public:
  using Error::Error;
};

class NonConservativeField : public Error {
 public:
  using Error::Error;
};

class AnchorOutsideDomain : public Error {
 public:
  using Error::Error;
};

class OriginNotInC : public Error {
 public:
  using Error::Error;
};

/// Malformed function-spec document, CSV table, or command-line value.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace proxcalc
