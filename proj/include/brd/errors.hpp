#pragma once

#include <stdexcept>
#include <string>

namespace brd {

// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation applied to a game model it does not support.
class UnsupportedModel : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A step, state or enumeration budget was exhausted. The CLI maps this to exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Best-response dynamics revisited a profile.
class CycleDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A deviator rule broke its contract (chose a player who cannot improve, or
// reported equilibrium on a non-equilibrium profile).
class RuleViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fixture failed its own construction-time checks.
class FixtureValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace brd
