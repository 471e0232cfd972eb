#include "szego/aak.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace szego {

SchmidtPair schmidt_pair(const HardySymbol& u, int k, int n_trunc, double tol_rel) {
    if (mass(u) <= 0.0) throw validation_error("zero symbol has no Schmidt pairs");
    const HankelPair pair = build_pair(u, n_trunc);
    const int n = pair.dim();
    if (k < 0 || k >= n) throw validation_error("singular value index out of range");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pair.gamma * pair.gamma.adjoint());
    if (es.info() != Eigen::Success) throw numerical_error("Hermitian eigensolve failed");
    auto s_at = [&](int i) { return std::sqrt(std::max(es.eigenvalues()[n - 1 - i], 0.0)); };

    const double s_max = s_at(0);
    const double gap_tol = tol_rel * std::max(s_max, 0.0);
    if (k > 0 && s_at(k - 1) - s_at(k) < gap_tol)
        throw validation_error("index does not sit at the left edge of its multiplicity "
                               "plateau (no strict gap above)");
    const double s = s_at(k);
    if (s <= gap_tol)
        throw validation_error("requested singular value is numerically zero");

    SchmidtPair out;
    out.s = s;
    out.h = make_symbol(Eigen::VectorXcd(es.eigenvectors().col(n - 1 - k)));
    out.f = make_symbol(Eigen::VectorXcd((pair.gamma * out.h.coeffs.conjugate()) / s));
    return out;
}

GridValues unimodular_symbol(const SchmidtPair& pair, int grid_m) {
    const int need = 2 * std::max(std::max(pair.h.n_modes(), pair.f.n_modes()), 1);
    if (!is_power_of_two(grid_m) || grid_m < need)
        throw validation_error("grid must be a power of two with M >= 2*modes");
    const GridValues gh = eval_grid(pair.h, grid_m);
    const GridValues gf = eval_grid(pair.f, grid_m);
    double h_max = 0.0;
    for (int i = 0; i < grid_m; ++i) h_max = std::max(h_max, std::abs(gh.values[i]));

    Eigen::VectorXcd phi(grid_m);
    int dropped = 0;
    double worst = 0.0;
    cd last_good{1.0, 0.0};
    for (int i = 0; i < grid_m; ++i) {
        const cd h = gh.values[i], f = gf.values[i];
        if (std::abs(h) >= 1e-6 * h_max) {
            phi[i] = f / std::conj(h);
            worst = std::max(worst, std::abs(std::abs(phi[i]) - 1.0));
            last_good = phi[i];
        } else {
            // |f| = |h| in exact arithmetic; keep the direction but pin the
            // modulus to one, falling back to the previous sample at a true zero
            const cd raw = f / std::conj(h);
            const double mag = std::abs(raw);
            phi[i] = std::isfinite(mag) && mag > 0 ? raw / mag : last_good;
            ++dropped;
        }
    }
    if (dropped > grid_m / 20)
        throw numerical_error("symbol ratio ill-conditioned: |h| nearly vanishes on more "
                              "than 5% of the grid");
    if (worst > 1e-6)
        throw numerical_error("ratio f/conj(h) deviates from the unit circle beyond 1e-6");
    return GridValues{std::move(phi)};
}

AakResult best_rank_approx(const HardySymbol& u, int k, int grid_m, int n_out,
                           double tol_rel) {
    if (n_out < 1) throw validation_error("n_out must be >= 1");
    if (!is_power_of_two(grid_m) || grid_m < 4 * n_out)
        throw validation_error("grid must be a power of two with M >= 4*n_out");
    const SchmidtPair pair = schmidt_pair(u, k, 0, tol_rel);
    const GridValues phi = unimodular_symbol(pair, grid_m);

    const HardySymbol proj = grid_to_symbol(phi, grid_m); // all bins
    double total = 0.0, tail = 0.0;
    const int half = grid_m / 2; // beyond lie the aliased negative modes of phi
    for (int j = 0; j < half; ++j) {
        const double e = std::norm(proj.coeffs[j]);
        total += e;
        if (j >= n_out) tail += e;
    }

    const int n_r = std::max(n_out, u.n_modes());
    Eigen::VectorXcd rc = Eigen::VectorXcd::Zero(n_r);
    for (int j = 0; j < n_r; ++j) rc[j] = u.coeff(j);
    for (int j = 0; j < n_out; ++j) rc[j] -= pair.s * proj.coeffs[j];

    AakResult res;
    res.r = make_symbol(std::move(rc));
    res.tail = total > 0 ? tail / total : 0.0;

    // certificate: operator norm of H_{u-r} and numerical rank of H_r
    Eigen::VectorXcd vc = Eigen::VectorXcd::Zero(n_r);
    for (int j = 0; j < n_out; ++j) vc[j] = pair.s * proj.coeffs[j];
    const HankelPair hv = build_pair(make_symbol(std::move(vc)), n_r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ev(hv.gamma * hv.gamma.adjoint(),
                                                       Eigen::EigenvaluesOnly);
    res.err = std::sqrt(std::max(ev.eigenvalues()[n_r - 1], 0.0));

    const HankelPair hr = build_pair(res.r, n_r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> er(hr.gamma * hr.gamma.adjoint(),
                                                       Eigen::EigenvaluesOnly);
    const HankelPair hu = build_pair(u, n_r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eu(hu.gamma * hu.gamma.adjoint(),
                                                       Eigen::EigenvaluesOnly);
    const double s1_u = std::sqrt(std::max(eu.eigenvalues()[n_r - 1], 0.0));
    // numerical-rank cut: 1e-6 relative leaves room for the truncation floor
    // of slowly decaying symbols while staying far below genuine values
    int rank = 0;
    for (int i = 0; i < n_r; ++i)
        if (std::sqrt(std::max(er.eigenvalues()[i], 0.0)) > 1e-6 * s1_u) ++rank;
    res.rank = rank;
    if (rank != k)
        throw numerical_error("rank certificate failed: Hankel matrix of the approximation "
                              "has numerical rank " + std::to_string(rank) +
                              ", expected " + std::to_string(k));
    return res;
}

} // namespace szego
