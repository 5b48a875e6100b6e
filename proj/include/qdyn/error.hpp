#pragma once

#include <stdexcept>
#include <string>

namespace qdyn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition or type invariant.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdyn
