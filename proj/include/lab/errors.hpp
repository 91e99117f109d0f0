#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lab {

/// Base error for all numeric failures. `name()` is a stable machine-readable
/// identifier (it is what the CLI prints on stderr before exiting).
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct ZeroPolynomial : Error {
  explicit ZeroPolynomial(const std::string& what) : Error("ZeroPolynomial", what) {}
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& what) : Error("NonConvergence", what) {}
};

struct NotSymmetric : Error {
  explicit NotSymmetric(const std::string& what) : Error("NotSymmetric", what) {}
};

struct OrderTooLarge : Error {
  explicit OrderTooLarge(const std::string& what) : Error("OrderTooLarge", what) {}
};

/// Zero pivot 1 - lambda^m in the triangular coefficient solve.
struct Resonance : Error {
  explicit Resonance(int m)
      : Error("Resonance", "zero pivot at order " + std::to_string(m)), order(m) {}
  int order;
};

struct NoComplexSaddle : Error {
  explicit NoComplexSaddle(const std::string& what) : Error("NoComplexSaddle", what) {}
};

struct TooFewSamples : Error {
  explicit TooFewSamples(const std::string& what) : Error("TooFewSamples", what) {}
};

struct DegenerateForm : Error {
  explicit DegenerateForm(const std::string& what) : Error("DegenerateForm", what) {}
};

struct DegenerateParameter : Error {
  explicit DegenerateParameter(const std::string& what) : Error("DegenerateParameter", what) {}
};

struct EscapedTrajectory : Error {
  explicit EscapedTrajectory(const std::string& what) : Error("EscapedTrajectory", what) {}
};

struct NoReturns : Error {
  explicit NoReturns(const std::string& what) : Error("NoReturns", what) {}
};

struct NotQuadratic : Error {
  explicit NotQuadratic(const std::string& what) : Error("NotQuadratic", what) {}
};

struct DegenerateDirection : Error {
  explicit DegenerateDirection(const std::string& what) : Error("DegenerateDirection", what) {}
};

struct NotCritical : Error {
  explicit NotCritical(const std::string& what) : Error("NotCritical", what) {}
};

struct SingularAtCriticalTime : Error {
  explicit SingularAtCriticalTime(const std::string& what)
      : Error("SingularAtCriticalTime", what) {}
};

struct ZeroCoordinate : Error {
  explicit ZeroCoordinate(const std::string& what) : Error("ZeroCoordinate", what) {}
};

struct ZeroSeparation : Error {
  explicit ZeroSeparation(const std::string& what) : Error("ZeroSeparation", what) {}
};

struct InternalMismatch : Error {
  explicit InternalMismatch(const std::string& what) : Error("InternalMismatch", what) {}
};

struct NoConvergenceSearch : Error {
  explicit NoConvergenceSearch(const std::string& what) : Error("NoConvergence", what) {}
};

struct InvalidMap : Error {
  explicit InvalidMap(const std::string& what) : Error("InvalidMap", what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace lab
