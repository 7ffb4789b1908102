#pragma once

#include <stdexcept>
#include <string>

namespace gphom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource cap would be exceeded. `progress` carries whatever
// partial-progress metadata the failing call could report.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::string progress = {})
      : Error("cap exceeded: " + what), progress_(std::move(progress)) {}
  const std::string& progress() const { return progress_; }

 private:
  std::string progress_;
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class NotPrime : public Error {
 public:
  using Error::Error;
};

class NotAUnit : public Error {
 public:
  using Error::Error;
};

class ActionClosureError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class WellDefinednessFailure : public Error {
 public:
  using Error::Error;
};

// The requested computation is outside what this library models (e.g. higher
// group homology with Z/2 summands in the coefficient module).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace gphom
