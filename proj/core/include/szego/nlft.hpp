#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "szego/blaschke.hpp"
#include "szego/hankel.hpp"

namespace szego {

/// Spectral image of a symbol: strictly decreasing singular values
/// s_1 > ... > s_n > 0 with Blaschke products attached, odd positions
/// H-dominant, even positions K-dominant. When n = 2q-1 the formulas below
/// use an implicit trailing s_{2q} = 0 with unit Blaschke product.
struct SpectralData {
    std::vector<double> s;
    std::vector<BlaschkeProduct> psi; // psi[r-1] pairs with s[r-1]

    int n() const { return static_cast<int>(s.size()); }
    int q() const { return (n() + 1) / 2; }
    bool odd() const { return n() % 2 == 1; }
};

/// Sizes match, all s positive and strictly decreasing with relative gaps
/// >= 1e-10. Throws validation_error otherwise. Empty data is allowed (the
/// zero symbol).
void validate(const SpectralData& sd);

struct ForwardOptions {
    int n_trunc = 0;  // 0: the symbol's own mode count
    int grid_m = 0;   // 0: smallest power of two >= max(4*n_trunc, 64)
    double tol_cluster = 1e-6;
    double tol_dom = 1e-8;
    double tol_fit = 1e-6;
};

/// Spectral analysis of the Hankel pair: dominance-split singular values and
/// a Blaschke product per cluster, fit from the boundary ratio
/// (s u_s)/(H_u u_s) on the H side and (K_u u'_s)/(s u'_s) on the K side.
/// Throws validation_error for the zero symbol or when the truncation leaves
/// the rank unresolved (last-quarter coefficient energy > 1e-10 of total);
/// numerical_error on fit/degree mismatch or inconsistent spectra.
SpectralData forward(const HardySymbol& u, const ForwardOptions& opts = {});

/// C(z)_{jk} = (rho_j - sigma_k z Psi_{2k}(z) Psi_{2j-1}(z)) / (rho_j^2 - sigma_k^2).
Eigen::MatrixXcd build_C(const SpectralData& sd, cd z);

/// Denominator-cleared variant:
/// C#(z)_{jk} = (rho_j D_{2k} D_{2j-1} - sigma_k z e^{-i(psi_{2k}+psi_{2j-1})} P_{2k} P_{2j-1})
///              / (rho_j^2 - sigma_k^2),
/// so that C = diag(1/D_{2j-1}) C# diag(1/D_{2k}).
Eigen::MatrixXcd build_Csharp(const SpectralData& sd, cd z);

struct InverseReport {
    double tail_energy = 0.0;   // energy fraction beyond the kept modes
    double min_abs_det = 0.0;   // min over the grid of |det C#|
    double max_condition = 0.0; // max over the grid of cond(C#)
};

/// Explicit inverse: evaluate u on the M-point grid by solving the q x q
/// system per point, then read off the first n_out modes. M must be a power
/// of two with M >= 4*n_out. Throws numerical_error if any grid system is
/// singular.
HardySymbol inverse(const SpectralData& sd, int grid_m, int n_out,
                    InverseReport* report = nullptr);

/// Single-point evaluation of the same formula, |z| <= 1.
cd inverse_point(const SpectralData& sd, cd z);

/// Decomposition values at z: components_sigma returns (u'_k(z))_k from the
/// direct solve, components_rho returns (u_j(z))_j from the transposed solve
/// t(C#) h# = (D_{2k}(z)); both lists sum to u(z).
std::vector<cd> components_sigma(const SpectralData& sd, cd z);
std::vector<cd> components_rho(const SpectralData& sd, cd z);

/// Closed-form squared norms of the eigenspace projections of u:
/// tau_sq[j-1] = ||u_{rho_j}||^2, kappa_sq[k-1] = ||u'_{sigma_k}||^2, and for
/// odd n the kernel component kappa0_sq = ||u'_0||^2.
struct NormingConstants {
    std::vector<double> tau_sq;
    std::vector<double> kappa_sq;
    double kappa0_sq = 0.0;
    bool has_kappa0 = false;
};

NormingConstants norming_constants(const SpectralData& sd);

/// Residuals of the four norming-constant identities; x-dependent ones are
/// sampled at 16 seeded points in (-1/s_1^2, 0).
struct BatemanReport {
    double generating = 0.0;  // product form vs partial-fraction form of J(x)
    double simple_sum = 0.0;  // sum tau^2/(rho^2-sigma^2) = 1
    double double_sum = 0.0;  // weighted double sum = delta / kappa^2
    double nu_sum = 0.0;      // 1 - sum tau^2/rho^2 = prod sigma^2/rho^2

    double max_residual() const;
};

BatemanReport bateman_check(const SpectralData& sd, const NormingConstants& nc,
                            std::uint64_t seed = 1234);

enum class KernelKind { trivial, nontrivial, undetermined };

/// Partial products deciding kernel triviality in the limit: prod_rho over
/// paired (rho_j, sigma_j) of sigma_j^2/rho_j^2, prod_sigma over paired
/// (sigma_k, rho_{k+1}) of sigma_k^2/rho_{k+1}^2. Finite data always has a
/// nontrivial kernel; with assume_truncated the products are trend
/// diagnostics over the complete pairs only and the kind is undetermined.
struct KernelDiagnostic {
    KernelKind kind = KernelKind::undetermined;
    double prod_rho = 1.0;
    double prod_sigma = 1.0;
};

KernelDiagnostic kernel_diagnostic(const SpectralData& sd, bool assume_truncated = false);

} // namespace szego
