#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crnkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidReaction : public Error {
 public:
  using Error::Error;
};

class InvalidReverse : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class UnknownSpecies : public Error {
 public:
  using Error::Error;
};

class NotWellLed : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Machine-level errors.
class InvalidProgram : public Error {
 public:
  using Error::Error;
};

class BoundExceeded : public Error {
 public:
  using Error::Error;
};

class StepCap : public Error {
 public:
  using Error::Error;
};

class SpaceCap : public Error {
 public:
  using Error::Error;
};

class NotAPermutation : public Error {
 public:
  using Error::Error;
};

class RankOutOfRange : public Error {
 public:
  using Error::Error;
};

class ZeroCount : public Error {
 public:
  using Error::Error;
};

// Compiler-level errors.
class UnboundedRegister : public Error {
 public:
  using Error::Error;
};

class BoundTooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace crnkit
