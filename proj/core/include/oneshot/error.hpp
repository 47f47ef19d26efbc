#pragma once

#include <stdexcept>
#include <string>

namespace oneshot {

// Every failure raised by the library derives from Error so callers (the CLI in
// particular) can map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite entries, wrong shapes, non-Hermitian input.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotPsd : public Error {
 public:
  using Error::Error;
};

// supp(rho) is not contained in supp(sigma) where a quantity requires it.
class SupportViolation : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

// epsilon outside [0, sqrt(tr rho)).
class SmoothingParameterError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// A construction or algorithm broke one of its own postconditions.
class InternalError : public Error {
 public:
  using Error::Error;
};

// The conic solver ran out of iterations; carries the best certified interval.
class SolverBudgetExhausted : public Error {
 public:
  SolverBudgetExhausted(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace oneshot
