#pragma once

#include <stdexcept>
#include <string>

namespace docmt {

// Base class for all toolkit errors. Validation errors map to exit code 1
// in the CLI, I/O errors to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace docmt
