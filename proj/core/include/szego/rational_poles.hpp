#pragma once

#include <vector>

#include "szego/nlft.hpp"

namespace szego {

/// Partial-fraction form u(z) = beta0 + sum_i residues[i]/(z - poles[i]) of
/// the synthesized symbol, available when every Blaschke factor has degree
/// zero. log_poles[i] = log(poles[i]) is computed in extended precision
/// before rounding, so poles grazing the unit circle far below the
/// double-precision spacing around 1 still carry an accurate distance.
struct PoleData {
    std::vector<cd> poles;
    std::vector<cd> residues;
    std::vector<cd> log_poles;
    cd beta0{0.0, 0.0};
};

PoleData rational_pole_data(const SpectralData& sd);

/// sqrt( sum_k (1+k)^{2s} |u^(k)|^2 ) evaluated in closed form from the pole
/// data: mode sums become polylogarithms, so no truncation is involved and
/// norms dominated by modes far beyond any realizable grid remain exact.
/// Requires degree-zero Blaschke data and s >= 0.
double sobolev_norm_exact(const SpectralData& sd, double s);

namespace detail {
/// sum_{k>=0} (1+k)^{2s} x^k for |x| < 1, via the Hurwitz-style expansion of
/// the polylogarithm around x = 1; log_x supplies log(x) at full precision.
cd power_weight_sum(double two_s, cd x, cd log_x);
} // namespace detail

} // namespace szego
