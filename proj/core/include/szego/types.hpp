#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace szego {

using cd = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Bad input or violated precondition: a caller mistake, not a numerical
/// breakdown. Maps to CLI exit code 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The computation itself failed a certified bound (fit residual, drift
/// abort, singular system, degenerate construction). Maps to CLI exit code 3.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace szego
