#pragma once

#include <stdexcept>

namespace gpe {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input violates a documented precondition of the operation.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Exponential weight would exceed the double-precision budget.
struct RadiusTooLarge : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Time stepping produced a non-finite coefficient.
struct NumericalOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation requested past the end of a radius schedule.
struct HorizonError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace gpe
