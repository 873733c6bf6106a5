#ifndef STOCHSUP_ERRORS_HPP
#define STOCHSUP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stochsup {

// Base of every exception thrown by the library. INFEASIBLE outcomes are
// never exceptions; they are reported through std::nullopt or status enums.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: non-metric distances, bad probabilities, unknown ids.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A ball G_j turned out empty, i.e. d(j, F) > R_j.
class EmptyBallError : public Error {
 public:
  using Error::Error;
};

// Strategy has neither an explicit stage-II set nor an extension rule.
class MissingScenarioError : public Error {
 public:
  using Error::Error;
};

// A brute-force or table-size cap was exceeded.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

class TableCapExceeded : public CapExceededError {
 public:
  using CapExceededError::CapExceededError;
};

class IterationLimitExceeded : public Error {
 public:
  using Error::Error;
};

// Iterative rounding could not find a client with integral ball mass.
class NoIntegralClientFound : public Error {
 public:
  using Error::Error;
};

// A live invariant check failed; always a numerics or logic bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace stochsup

#endif  // STOCHSUP_ERRORS_HPP
