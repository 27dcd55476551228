#pragma once

#include <stdexcept>
#include <string>

namespace stpa {

/// Base class for errors raised by library operations.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A referenced identifier does not exist (or cannot be resolved uniquely).
struct NotFoundError : Error {
  using Error::Error;
};

/// A cross-reference inside a model does not resolve.
struct IntegrityError : Error {
  using Error::Error;
};

}  // namespace stpa
