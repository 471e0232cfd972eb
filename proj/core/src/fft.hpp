#pragma once

#include <Eigen/Core>

#include "szego/types.hpp"

namespace szego::detail {

// Thin FFTW wrapper with cached plans. sign = -1: X[k] = sum_m x[m] e^{-2pi i km/M}
// (unnormalized); sign = +1: the conjugate transform. Thread-safe.
void fft(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, int sign);

} // namespace szego::detail
