#pragma once

#include <stdexcept>
#include <string>

namespace surfspline {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The node set does not determine the polynomial part uniquely.
class UnisolvenceError : public Error {
 public:
  UnisolvenceError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Factorization of the interpolation system is too ill-conditioned to trust.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// Too few usable refinement levels to fit a rate.
class InsufficientLevelsError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace surfspline
