#pragma once

#include <stdexcept>
#include <string>

namespace hypmax {

/// Invalid call: wrong arity, bad parameter combination, unknown option.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A stated precondition of an estimate (e.g. |l - j| <= r) does not hold.
class PreconditionError : public UsageError {
 public:
  explicit PreconditionError(const std::string& what) : UsageError(what) {}
};

/// Geodesic requested through two coincident points.
class DegenerateGeodesicError : public DomainError {
 public:
  explicit DegenerateGeodesicError(const std::string& what) : DomainError(what) {}
};

}  // namespace hypmax
