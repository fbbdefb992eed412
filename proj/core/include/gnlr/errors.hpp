#pragma once

#include <stdexcept>
#include <string>

namespace gnlr {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A matrix required to have full column rank does not (sigma_min below the
/// rank tolerance). Solvers treat this as a terminal numerical failure.
class RankDeficientError : public Error {
public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

/// An iterative kernel (truncated SVD, power method) hit its iteration cap
/// before reaching tolerance.
class ConvergenceFailureError : public Error {
public:
  using Error::Error;
};

/// A symmetric-problem routine received a matrix that is not symmetric to
/// tolerance.
class AsymmetricInputError : public Error {
public:
  using Error::Error;
};

/// The backtracking linesearch hit its iteration cap without satisfying the
/// sufficient-decrease condition.
class LinesearchExhaustedError : public Error {
public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

class DuplicateEntryError : public ParseError {
public:
  using ParseError::ParseError;
};

class OutOfBoundsError : public ParseError {
public:
  using ParseError::ParseError;
};

/// A configuration value failed validation. Carries the offending key.
class ValidationError : public Error {
public:
  ValidationError(const std::string& key, const std::string& msg)
      : Error("invalid value for '" + key + "': " + msg), key_(key) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace gnlr
