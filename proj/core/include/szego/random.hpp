#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace szego {

/// Canonical uniform in [0,1): the engine's top 53 bits scaled by 2^-53.
/// std::uniform_real_distribution is not byte-portable across library
/// implementations; this is, given the fixed mt19937_64 stream.
inline double canonical_uniform(std::mt19937_64& gen) {
    return std::ldexp(static_cast<double>(gen() >> 11), -53);
}

} // namespace szego
