#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jengap {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on plain arguments (sizes, signs, ranges) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A discrete measure failed its invariants (negative weight, bad sum,
/// duplicate atom labels).
class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

/// Two measures that must live on the same atom list do not.
class AtomSetMismatch : public Error {
 public:
  using Error::Error;
};

/// Some atom carries P-mass where Q vanishes, so dP/dQ does not exist.
class AbsoluteContinuityViolated : public Error {
 public:
  using Error::Error;
};

/// Conditioning event has zero mass.
class EmptyConditioningEvent : public Error {
 public:
  using Error::Error;
};

/// Expression text failed to parse. Carries the byte offset of the first
/// offending position and the token set that would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset,
             std::vector<std::string> expected)
      : Error(msg), offset(offset), expected(std::move(expected)) {}

  std::size_t offset;
  std::vector<std::string> expected;
};

/// Evaluation left the function's domain (log of a nonpositive number,
/// division by zero, non-finite result, point outside the declared interval).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Some value of X on the support lies outside phi's domain.
class RangeNotContained : public Error {
 public:
  using Error::Error;
};

class NotConvex : public Error {
 public:
  using Error::Error;
};

class NotConcave : public Error {
 public:
  using Error::Error;
};

class NotStrictlyConvex : public Error {
 public:
  using Error::Error;
};

/// X must be strictly positive on the support for the AM-GM bounds.
class NonpositiveValue : public Error {
 public:
  using Error::Error;
};

/// The equality-case condition logic and the numeric comparison disagree.
/// This signals an implementation bug, never a property of the input.
class ClassifierContradiction : public Error {
 public:
  using Error::Error;
};

/// A proven inequality came out violated beyond tolerance. Implementation
/// bug signal; surfaces as exit code 3 in the CLI.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

/// sigma1 > sigma2 where the ordering sigma1 <= sigma2 is required.
class InvalidSigmaOrder : public Error {
 public:
  using Error::Error;
};

/// Density expression is negative on its support or does not integrate to 1.
class InvalidDensity : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature stopped before reaching the requested tolerance.
/// Carries the partial value and the refinement trend (running estimates
/// recorded as panels accumulated); a growing trend is the divergence
/// heuristic used by the continuous-gap diagnosis.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& msg, double partial_value,
                 double error_estimate, std::vector<double> trend)
      : Error(msg),
        partial_value(partial_value),
        error_estimate(error_estimate),
        trend(std::move(trend)) {}

  double partial_value;
  double error_estimate;
  std::vector<double> trend;
};

/// A problem file failed schema validation. `path` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& path, const std::string& msg)
      : Error(path + ": " + msg), path(path) {}

  std::string path;
};

}  // namespace jengap
