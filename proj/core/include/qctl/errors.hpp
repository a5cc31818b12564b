#pragma once

#include <stdexcept>
#include <string>

namespace qctl {

// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Inconsistent matrix shapes or channel dimensions.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// A stated precondition does not hold (odd dimension, asymmetric coupling,
// non-conjugate-closed pole set, undetectable pair, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

// A numerical procedure failed (ill-conditioned placement, indefinite
// factorization input, diverging integration, ...).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// Unreadable, malformed, or schema-invalid input file.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

inline void require_dims(bool condition, const std::string& what) {
  if (!condition) throw DimensionError(what);
}

}  // namespace detail
}  // namespace qctl
