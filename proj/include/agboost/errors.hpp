#pragma once

#include <stdexcept>
#include <string>

namespace agboost {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or input validation failure (bad parameter, shape mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace detail
}  // namespace agboost
