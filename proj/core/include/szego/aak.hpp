#pragma once

#include "szego/hankel.hpp"

namespace szego {

/// Schmidt pair at a singular value: H_u(h) = s f and H_u(f) = s h.
struct SchmidtPair {
    HardySymbol h;
    HardySymbol f;
    double s = 0.0;
};

/// Pair for the k-th singular value counted with multiplicity, k = 0 topmost.
/// k must sit at the left edge of its multiplicity plateau (a strict gap
/// above, or the rank-k optimum is not attained there); n_trunc = 0 uses the
/// symbol's own mode count.
SchmidtPair schmidt_pair(const HardySymbol& u, int k, int n_trunc = 0, double tol_rel = 1e-6);

/// Boundary samples of phi = f / conj(h), unimodular up to round-off.
/// Samples where |h| < 1e-6 * max|h| are renormalized instead of checked;
/// more than 5% such samples is an error.
GridValues unimodular_symbol(const SchmidtPair& pair, int grid_m);

struct AakResult {
    HardySymbol r;       // best approximation symbol, u - s*Pi(phi)
    double err = 0.0;    // operator norm of the Hankel matrix of u - r
    int rank = 0;        // numerical rank of the Hankel matrix of r
    double tail = 0.0;   // energy fraction of Pi(phi) beyond the kept modes
};

/// Best rank-k Hankel approximation: r = u - s_k * Pi(phi) with phi from the
/// Schmidt pair at k. Certifies err = s_k and rank(H_r) = k (singular values
/// above 1e-6 * s_1 counted); a failed rank check is a numerical_error.
AakResult best_rank_approx(const HardySymbol& u, int k, int grid_m, int n_out,
                           double tol_rel = 1e-6);

} // namespace szego
