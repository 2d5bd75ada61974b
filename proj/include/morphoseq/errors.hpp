#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morphoseq {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A caller-supplied argument violates a precondition.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// A computation produced NaN or Inf.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Input text does not follow the expected syntax.
class ParseError : public Error {
public:
  /// line 0 means "no line information".
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Syntactically valid input that breaks a data invariant.
class ValidationError : public Error {
public:
  ValidationError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Checkpoint could not be loaded.
class CheckpointError : public Error {
public:
  enum class Kind { BadMagic, VersionMismatch, Truncated, ShapeMismatch, Malformed };

  CheckpointError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

}  // namespace morphoseq
