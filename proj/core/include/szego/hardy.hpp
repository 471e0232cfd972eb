#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <vector>

#include "szego/types.hpp"

namespace szego {

/// Element of the Hardy space, stored as its nonnegative Fourier modes
/// u^(0..N-1). The analytic extension is u(z) = sum_k u^(k) z^k on |z|<=1.
struct HardySymbol {
    Eigen::VectorXcd coeffs;

    int n_modes() const { return static_cast<int>(coeffs.size()); }
    cd coeff(int k) const { return (k >= 0 && k < n_modes()) ? coeffs[k] : cd{0.0, 0.0}; }
};

/// Boundary samples on the M-th roots of unity, values[m] = u(e^{2pi i m/M}).
struct GridValues {
    Eigen::VectorXcd values;

    int m_grid() const { return static_cast<int>(values.size()); }
};

HardySymbol make_symbol(Eigen::VectorXcd coeffs);
HardySymbol make_symbol(const std::vector<cd>& coeffs);
HardySymbol make_symbol(std::initializer_list<cd> coeffs);

bool is_power_of_two(int m);

/// values[m] = sum_k u^(k) e^{2pi i k m / M}. Requires M a power of two with
/// M >= 2*n_modes (alias guard).
GridValues eval_grid(const HardySymbol& u, int M);

/// Evaluate at one point of the closed disc by Horner summation.
cd eval_point(const HardySymbol& u, cd z);

/// Inverse of eval_grid: first N modes of the sampled function. Exact when
/// the function's bandwidth is below M.
HardySymbol grid_to_symbol(const GridValues& g, int N);

/// Szego projector on a two-sided coefficient list c(-K..K) (index 0 at
/// two_sided[K]): keep modes k >= 0.
HardySymbol szego_project(const Eigen::VectorXcd& two_sided, int K);

/// Pointwise product on a shared grid.
GridValues grid_multiply(const GridValues& a, const GridValues& b);

/// sqrt( sum_l (1+l)^{2s} |u^(l)|^2 ).
double sobolev_norm(const HardySymbol& u, double s);

/// L^2 norm squared, sum |u^(l)|^2.
double mass(const HardySymbol& u);

/// Two-sided Fourier coefficients of |u|^2, indices -(N-1)..(N-1) packed as
/// result[j + N - 1]. Computed on a dealiased grid (M >= 4*n_modes).
Eigen::VectorXcd abs_sq_two_sided(const HardySymbol& u, int M);

/// (1/4) * mean of |u|^4 over the circle; M >= 4*n_modes required so the
/// quartic term is alias-free.
double energy(const HardySymbol& u, int M);

/// Expand the rational function A(z)/B(z) (coefficients low-to-high, B(0)=1)
/// into its first N Taylor modes. All roots of B must lie strictly outside
/// the closed unit disc (else rejection). If tail_bound is given it receives
/// a geometric estimate of the dropped tail mass, extrapolated from the last
/// kept coefficient with ratio 1/min|root of B|.
HardySymbol from_rational(const std::vector<cd>& A, const std::vector<cd>& B, int N,
                          double* tail_bound = nullptr);

} // namespace szego
