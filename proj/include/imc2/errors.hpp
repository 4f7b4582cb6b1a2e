#pragma once

#include <stdexcept>
#include <string>

namespace imc2 {

// Base of every error thrown by the library. The CLI maps all of these to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A raw automaton description violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed BA/HOA text, or HOA outside the supported subset.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit FormatError(const std::string& what) : FormatError(what, 0) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// An exhaustive construction would exceed its configured size bound.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace imc2
