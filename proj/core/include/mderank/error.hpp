#pragma once

#include <stdexcept>
#include <string>

namespace mderank {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (dataset files, model directories, prediction files).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace mderank
