#pragma once

#include <cstdint>
#include <vector>

#include "szego/flow.hpp"

namespace szego {

/// A base spectrum (even length, possibly empty) extended by a cluster of
/// small singular values delta(1+eps*xi_1) > delta(1+eps*eta_1) > ... >
/// delta(1+eps*xi_N), unit Blaschke products attached, trailing zero
/// implicit. The xi/eta interlace strictly; N = 0 means no cluster.
struct TurbulenceParams {
    SpectralData base;
    double delta = 0.0;
    double eps = 0.0;
    std::vector<double> xi;
    std::vector<double> eta;
    int N = 0;
};

/// Default frequencies: xi_j = 2*pi*(N-j+1), eta_k the midpoints.
TurbulenceParams make_turbulence_params(SpectralData base, double delta, double eps, int N);

/// Concatenated, validated spectral data of the family member.
SpectralData turbulence_data(const TurbulenceParams& p);

HardySymbol turbulence_family(const TurbulenceParams& p, int grid_m, int n_out);

struct TravelingWave {
    HardySymbol u0;
    double c = 0.0;     // angular speed
    double omega = 0.0; // phase speed
};

/// u0(z) = ((rho^2-sigma^2) e^{-i phi} / rho) z^{m-1} / (1 - (sigma/rho) e^{-i(phi+theta)} z^{l+m-1})
/// with c = (rho^2-sigma^2)/(m-1+l), omega = rho^2 - (m-1)c; the evolution
/// is the rotation u(t, e^{ix}) = e^{-i omega t} u0(e^{i(x-ct)}).
TravelingWave traveling_wave(double rho, double sigma, int m, int ell, double phi,
                             double theta, int n_out = 64);

/// Integrate directly to T and compare mode-wise with
/// u^(t)(k) = e^{-i(omega+ck)t} u0^(k); returns the max modal deviation.
double check_traveling(const TravelingWave& tw, double T, double dt, int grid_m = 0);

struct SweepRow {
    double eps = 0.0;
    double norm = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0.0;    // least-squares d log(norm) / d log(1/eps)
    double expected = 0.0; // (N-1)(2s-1)
    double delta = 0.0;
    double sobolev_s = 0.0;
    int retries = 0;
};

/// Sweep ||u^{delta,eps}||_{H^s} over eps_list (decreasing) and fit the
/// log-log slope. When every Blaschke factor in the data has degree zero the
/// norm is evaluated in closed form from the pole structure (grid arguments
/// ignored); otherwise by synthesis on the grid, rejecting runs whose
/// truncation tail exceeds 1% (raise n_out). If the fitted slope misses the
/// expected one by more than 15%, the frequencies are jittered (seeded) and
/// the sweep retried, up to 5 times.
SweepResult growth_sweep(const TurbulenceParams& tmpl, double sobolev_s,
                         const std::vector<double>& eps_list, int grid_m, int n_out,
                         std::uint64_t seed = 7);

/// Evolve the family member exactly to t* = 1/(2 eps delta^2) and compare
/// with the base block carrying the predicted phases; returns
/// max_k (1+k)^4 |u_evolved^(k) - u_predicted^(k)| over the kept modes.
double return_check(const TurbulenceParams& p, int grid_m = 512, int n_out = 48);

/// Gram matrix of the H-side eigenspace basis (z^a / D) H_u(u_j),
/// a = 0..m-1, for the cluster at sd position entry_index (0-based, must be
/// an odd position, i.e. even index). The symbol is synthesized internally.
Eigen::MatrixXcd gram_matrix(const SpectralData& sd, int entry_index, int grid_m, int n_out);

/// Sup-norm difference of the Gram matrices of u and of the symbol rebuilt
/// after the angle shifts Psi_r -> e^{i gamma_r} Psi_r (zeros untouched);
/// vanishes by isospectral-torus invariance.
double gram_invariance(const SpectralData& sd, const std::vector<double>& gamma,
                       int entry_index, int grid_m, int n_out);

} // namespace szego
