#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad rank, bad config value).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Evaluation outside the closure domain (e.g. non-positive lambda_ll).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Building a lattice failed for mathematical reasons.
class BuildError : public Error {
public:
  using Error::Error;
};

/// An iterative procedure (quadrature, Newton) did not converge.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

} // namespace mcf
