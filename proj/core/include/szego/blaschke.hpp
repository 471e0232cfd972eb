#pragma once

#include <Eigen/Core>
#include <vector>

#include "szego/hardy.hpp"
#include "szego/types.hpp"

namespace szego {

/// Finite Blaschke product e^{-i angle} prod_j (z - p_j)/(1 - conj(p_j) z),
/// zeros strictly inside the open unit disc.
struct BlaschkeProduct {
    double angle = 0.0;            // in [0, 2pi)
    std::vector<cd> zeros;

    int degree() const { return static_cast<int>(zeros.size()); }
};

/// Validating constructor: folds the angle into [0,2pi), rejects zeros with
/// |p| > 1 - 1e-12.
BlaschkeProduct make_blaschke(double angle, std::vector<cd> zeros = {});

cd eval(const BlaschkeProduct& b, cd z);

/// Monic numerator P and normalized denominator D(z) = z^d conj(P)(1/z),
/// D(0) = 1, as coefficient vectors (low to high). Psi = e^{-i angle} P / D.
struct MonicPair {
    Eigen::VectorXcd p, d;
};
MonicPair monic_pair(const BlaschkeProduct& b);

cd eval_poly(const Eigen::VectorXcd& coeffs, cd z);

/// Schur-Cohn test: true iff the monic polynomial z^d + a1 z^{d-1} + ... + ad
/// has all roots strictly inside the unit disc. a = (a1, ..., ad).
bool schur_cohn(const std::vector<cd>& a);

/// Roots of a polynomial (low-to-high coefficients) via the companion matrix.
std::vector<cd> poly_roots(const Eigen::VectorXcd& coeffs);

/// Fit a degree-d Blaschke product to unimodular boundary samples r_m at
/// points zeta_m: least-squares null vector of P(zeta) - r Q(zeta) over
/// polynomials of degree <= d, then structural checks (Q is the reversed
/// conjugate of P, zeros inside the disc, pointwise residual <= tol).
BlaschkeProduct fit_from_boundary(const std::vector<cd>& zeta, const std::vector<cd>& r,
                                  int d, double tol);

/// Same fit on a full equispaced grid (zeta_m = e^{2pi i m/M}).
BlaschkeProduct fit_from_boundary(const GridValues& ratio, int d, double tol);

} // namespace szego
