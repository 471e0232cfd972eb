#include "szego/hankel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace szego {

HankelPair build_pair(const HardySymbol& u, int n_trunc) {
    const int n = n_trunc > 0 ? n_trunc : std::max(u.n_modes(), 1);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd gs = Eigen::MatrixXcd::Zero(n, n);
    for (int r = 0; r < n; ++r)
        for (int p = 0; p < n; ++p) {
            g(r, p) = u.coeff(r + p);
            gs(r, p) = u.coeff(r + p + 1);
        }
    return HankelPair{std::move(g), std::move(gs), u};
}

Eigen::MatrixXcd toeplitz_matrix(const Eigen::VectorXcd& b_two_sided, int n) {
    if (b_two_sided.size() % 2 == 0) throw validation_error("two-sided list must have odd length");
    const long k_max = (b_two_sided.size() - 1) / 2;
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
    for (int r = 0; r < n; ++r)
        for (int p = 0; p < n; ++p) {
            const long d = r - p;
            if (d >= -k_max && d <= k_max) t(r, p) = b_two_sided[d + k_max];
        }
    return t;
}

HardySymbol apply_hankel(const HankelPair& pair, const HardySymbol& h) {
    const int n = pair.dim();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    for (int k = 0; k < std::min(n, h.n_modes()); ++k) x[k] = std::conj(h.coeff(k));
    return make_symbol(Eigen::VectorXcd(pair.gamma * x));
}

HardySymbol apply_shifted(const HankelPair& pair, const HardySymbol& h) {
    const int n = pair.dim();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    for (int k = 0; k < std::min(n, h.n_modes()); ++k) x[k] = std::conj(h.coeff(k));
    return make_symbol(Eigen::VectorXcd(pair.gamma_shift * x));
}

EigenCluster project_symbol(const HardySymbol& u, EigenCluster cluster) {
    const long n = cluster.basis.rows();
    Eigen::VectorXcd uc = Eigen::VectorXcd::Zero(n);
    for (long k = 0; k < std::min<long>(n, u.n_modes()); ++k) uc[k] = u.coeff(static_cast<int>(k));
    Eigen::VectorXcd proj = cluster.basis * (cluster.basis.adjoint() * uc);
    cluster.norm_sq = proj.squaredNorm();
    cluster.u_proj = make_symbol(std::move(proj));
    return cluster;
}

std::vector<EigenCluster> spectral_clusters(const HankelPair& pair, OperatorSide side,
                                            double tol_rel) {
    if (!(tol_rel > 0.0 && tol_rel < 1e-2))
        throw validation_error("clustering tolerance must lie in (0, 1e-2)");
    const Eigen::MatrixXcd& g = side == OperatorSide::H ? pair.gamma : pair.gamma_shift;
    Eigen::MatrixXcd form = g * g.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(form);
    if (es.info() != Eigen::Success) throw numerical_error("Hermitian eigensolve failed");

    const int n = pair.dim();
    std::vector<double> s(static_cast<size_t>(n));
    // ascending from Eigen; flip to descending
    for (int i = 0; i < n; ++i)
        s[static_cast<size_t>(i)] = std::sqrt(std::max(es.eigenvalues()[n - 1 - i], 0.0));
    const double s_max = std::max(s[0], 0.0);

    std::vector<EigenCluster> out;
    if (s_max == 0.0) {
        EigenCluster c;
        c.s = 0.0;
        c.s_sq = 0.0;
        c.mult = n;
        c.basis = es.eigenvectors();
        c.side = side;
        c.kernel = true;
        out.push_back(project_symbol(pair.source, std::move(c)));
        return out;
    }

    const double gap_tol = tol_rel * s_max;
    std::vector<int> starts{0};
    std::vector<bool> fragile(static_cast<size_t>(n), false);
    for (int i = 0; i + 1 < n; ++i) {
        const double gap = s[static_cast<size_t>(i)] - s[static_cast<size_t>(i + 1)];
        if (gap >= gap_tol) starts.push_back(i + 1);
        if (gap >= gap_tol / 10.0 && gap < gap_tol * 10.0) {
            fragile[static_cast<size_t>(i)] = true;
            fragile[static_cast<size_t>(i + 1)] = true;
        }
    }
    starts.push_back(n);

    for (size_t c = 0; c + 1 < starts.size(); ++c) {
        const int lo = starts[c], hi = starts[c + 1];
        EigenCluster cl;
        cl.mult = hi - lo;
        double mean = 0.0;
        for (int i = lo; i < hi; ++i) mean += s[static_cast<size_t>(i)];
        cl.s = mean / cl.mult;
        cl.s_sq = cl.s * cl.s;
        cl.side = side;
        cl.kernel = cl.s < gap_tol;
        cl.basis.resize(n, cl.mult);
        for (int i = lo; i < hi; ++i) cl.basis.col(i - lo) = es.eigenvectors().col(n - 1 - i);
        for (int i = lo; i < hi; ++i) cl.ambiguous = cl.ambiguous || fragile[static_cast<size_t>(i)];
        out.push_back(project_symbol(pair.source, std::move(cl)));
    }
    return out;
}

SpectralSkeleton dominance_split(const HardySymbol& u,
                                 const std::vector<EigenCluster>& clusters_h,
                                 const std::vector<EigenCluster>& clusters_k,
                                 double tol_dom) {
    if (!(tol_dom > 0.0)) throw validation_error("dominance tolerance must be positive");
    const double u_norm = std::sqrt(mass(u));
    const double dom_threshold = tol_dom * u_norm;

    SpectralSkeleton sk;
    auto collect = [&](const std::vector<EigenCluster>& cls) {
        for (size_t i = 0; i < cls.size(); ++i) {
            const EigenCluster& c = cls[i];
            if (c.kernel) continue;
            if (std::sqrt(c.norm_sq) <= dom_threshold) continue;
            sk.entries.push_back(SkeletonEntry{c.s, c.side, c.mult, 0, static_cast<int>(i)});
        }
    };
    collect(clusters_h);
    collect(clusters_k);
    std::sort(sk.entries.begin(), sk.entries.end(),
              [](const SkeletonEntry& a, const SkeletonEntry& b) { return a.s > b.s; });

    const double s_max = sk.entries.empty() ? 0.0 : sk.entries.front().s;
    for (size_t r = 0; r + 1 < sk.entries.size(); ++r) {
        if (sk.entries[r].s - sk.entries[r + 1].s <= 1e-12 * s_max)
            throw numerical_error("singular value dominant on both sides "
                                  "(inconsistent spectrum; check tolerances)");
        if (sk.entries[r].side == sk.entries[r + 1].side)
            throw numerical_error("dominant singular values fail to interlace "
                                  "(inconsistent spectrum; check tolerances)");
    }
    if (!sk.entries.empty() && sk.entries.front().side != OperatorSide::H)
        throw numerical_error("largest dominant singular value is not H-side "
                              "(inconsistent spectrum; check tolerances)");

    // Lemma: a value dominant on one side appears on the other with
    // multiplicity one less. Locate the opposite-side cluster at the same s.
    auto other_mult = [&](const SkeletonEntry& e) {
        const std::vector<EigenCluster>& oth =
            e.side == OperatorSide::H ? clusters_k : clusters_h;
        for (const EigenCluster& c : oth) {
            if (c.kernel) continue;
            if (std::abs(c.s - e.s) <= 1e-6 * std::max(s_max, 1.0)) return c.mult;
        }
        return 0;
    };
    for (SkeletonEntry& e : sk.entries) {
        e.other_mult = other_mult(e);
        if (e.other_mult != e.mult - 1) sk.mult_pairing_ok = false;
    }
    return sk;
}

} // namespace szego
