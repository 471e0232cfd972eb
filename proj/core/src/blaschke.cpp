#include "szego/blaschke.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace szego {

BlaschkeProduct make_blaschke(double angle, std::vector<cd> zeros) {
    if (!std::isfinite(angle)) throw validation_error("angle must be finite");
    for (const cd& p : zeros)
        if (std::abs(p) > 1.0 - 1e-12)
            throw validation_error("Blaschke zero too close to the unit circle");
    double a = std::fmod(angle, 2.0 * pi);
    if (a < 0) a += 2.0 * pi;
    if (2.0 * pi - a < 1e-12) a = 0.0; // canonical representative at the seam
    for (cd& p : zeros) {
        if (p.real() == 0.0) p.real(0.0); // drop negative-zero components
        if (p.imag() == 0.0) p.imag(0.0);
    }
    return BlaschkeProduct{a, std::move(zeros)};
}

cd eval(const BlaschkeProduct& b, cd z) {
    cd out = std::polar(1.0, -b.angle);
    for (const cd& p : b.zeros) out *= (z - p) / (1.0 - std::conj(p) * z);
    return out;
}

MonicPair monic_pair(const BlaschkeProduct& b) {
    const int d = b.degree();
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(d + 1);
    p[0] = 1.0;
    int deg = 0;
    for (const cd& root : b.zeros) {
        // multiply by (z - root)
        for (int k = deg + 1; k >= 1; --k) p[k] = p[k - 1] - root * p[k];
        p[0] = -root * p[0];
        ++deg;
    }
    Eigen::VectorXcd dd(d + 1);
    for (int k = 0; k <= d; ++k) dd[k] = std::conj(p[d - k]);
    return MonicPair{std::move(p), std::move(dd)};
}

cd eval_poly(const Eigen::VectorXcd& coeffs, cd z) {
    cd acc{0.0, 0.0};
    for (long k = coeffs.size() - 1; k >= 0; --k) acc = acc * z + coeffs[k];
    return acc;
}

bool schur_cohn(const std::vector<cd>& a) {
    std::vector<cd> cur = a;
    while (!cur.empty()) {
        const cd ad = cur.back();
        if (std::abs(ad) >= 1.0) return false;
        const size_t d = cur.size();
        const double denom = 1.0 - std::norm(ad);
        std::vector<cd> next(d - 1);
        for (size_t k = 1; k < d; ++k)
            next[k - 1] = (cur[k - 1] - ad * std::conj(cur[d - 1 - k])) / denom;
        cur = std::move(next);
    }
    return true;
}

std::vector<cd> poly_roots(const Eigen::VectorXcd& coeffs) {
    long deg = coeffs.size() - 1;
    while (deg > 0 && std::abs(coeffs[deg]) == 0.0) --deg;
    if (deg < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (long i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (long i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cd> roots(static_cast<size_t>(deg));
    for (long i = 0; i < deg; ++i) roots[static_cast<size_t>(i)] = es.eigenvalues()[i];
    return roots;
}

BlaschkeProduct fit_from_boundary(const std::vector<cd>& zeta, const std::vector<cd>& r,
                                  int d, double tol) {
    if (zeta.size() != r.size()) throw validation_error("sample size mismatch");
    const long m = static_cast<long>(zeta.size());
    if (m < 2 * (d + 1)) throw validation_error("not enough samples for requested degree");
    if (tol <= 0) throw validation_error("tolerance must be positive");
    for (const cd& v : r)
        if (std::abs(std::abs(v) - 1.0) > 10.0 * tol)
            throw validation_error("boundary samples are not unimodular");

    // rows: [1 z .. z^d | -r -rz .. -rz^d], null vector = (P | Q)
    Eigen::MatrixXcd sys(m, 2 * (d + 1));
    for (long i = 0; i < m; ++i) {
        cd pw{1.0, 0.0};
        for (int k = 0; k <= d; ++k) {
            sys(i, k) = pw;
            sys(i, d + 1 + k) = -r[static_cast<size_t>(i)] * pw;
            pw *= zeta[static_cast<size_t>(i)];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeThinV);
    Eigen::VectorXcd v = svd.matrixV().col(2 * d + 1);
    Eigen::VectorXcd P = v.head(d + 1), Q = v.tail(d + 1);

    const cd lead = P[d];
    if (std::abs(lead) < 1e-8 * v.norm())
        throw numerical_error("fit degenerate at requested degree (leading coefficient vanishes)");
    P /= lead;
    Q /= lead;
    const cd phase = Q[0]; // e^{i angle}
    if (std::abs(std::abs(phase) - 1.0) > 1e-6)
        throw numerical_error("fitted quotient lacks Blaschke structure (non-unimodular constant)");
    Eigen::VectorXcd D = Q / phase;
    double struct_err = 0.0;
    for (int k = 0; k <= d; ++k)
        struct_err = std::max(struct_err, std::abs(D[k] - std::conj(P[d - k])));
    if (struct_err > std::max(1e3 * tol, 1e-9) * P.norm())
        throw numerical_error("fitted denominator is not the reversed conjugate of the numerator");

    std::vector<cd> roots = poly_roots(P);
    for (const cd& root : roots)
        if (std::abs(root) > 1.0 - 1e-12)
            throw numerical_error("fitted zero outside the open unit disc");
    std::vector<cd> monic_tail(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) monic_tail[static_cast<size_t>(k)] = P[d - 1 - k];
    if (!schur_cohn(monic_tail)) throw numerical_error("fitted numerator fails the Schur test");

    double angle = std::atan2(phase.imag(), phase.real());
    BlaschkeProduct out = make_blaschke(angle, std::move(roots));

    double resid = 0.0;
    for (long i = 0; i < m; ++i)
        resid = std::max(resid, std::abs(eval(out, zeta[static_cast<size_t>(i)]) -
                                         r[static_cast<size_t>(i)]));
    if (resid > tol)
        throw numerical_error("Blaschke fit residual " + std::to_string(resid) +
                              " exceeds tolerance (degree mismatch?)");
    return out;
}

BlaschkeProduct fit_from_boundary(const GridValues& ratio, int d, double tol) {
    const int M = ratio.m_grid();
    std::vector<cd> zeta(static_cast<size_t>(M)), r(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) {
        zeta[static_cast<size_t>(i)] = std::polar(1.0, 2.0 * pi * i / M);
        r[static_cast<size_t>(i)] = ratio.values[i];
    }
    return fit_from_boundary(zeta, r, d, tol);
}

} // namespace szego
