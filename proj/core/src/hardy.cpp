#include "szego/hardy.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"

namespace szego {

HardySymbol make_symbol(Eigen::VectorXcd coeffs) {
    if (coeffs.size() == 0) throw validation_error("symbol needs at least one mode");
    if (!coeffs.allFinite()) throw validation_error("symbol coefficients must be finite");
    return HardySymbol{std::move(coeffs)};
}

HardySymbol make_symbol(const std::vector<cd>& coeffs) {
    Eigen::VectorXcd v(static_cast<long>(coeffs.size()));
    for (size_t i = 0; i < coeffs.size(); ++i) v[static_cast<long>(i)] = coeffs[i];
    return make_symbol(std::move(v));
}

HardySymbol make_symbol(std::initializer_list<cd> coeffs) {
    return make_symbol(std::vector<cd>(coeffs));
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

GridValues eval_grid(const HardySymbol& u, int M) {
    if (!is_power_of_two(M)) throw validation_error("grid size must be a power of two");
    if (M < 2 * u.n_modes())
        throw validation_error("grid size " + std::to_string(M) + " would alias " +
                               std::to_string(u.n_modes()) + " modes");
    Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(M);
    padded.head(u.coeffs.size()) = u.coeffs;
    GridValues g;
    detail::fft(padded, g.values, +1);
    return g;
}

cd eval_point(const HardySymbol& u, cd z) {
    cd acc{0.0, 0.0};
    for (int k = u.n_modes() - 1; k >= 0; --k) acc = acc * z + u.coeffs[k];
    return acc;
}

HardySymbol grid_to_symbol(const GridValues& g, int N) {
    const int M = g.m_grid();
    if (N < 1 || N > M) throw validation_error("requested mode count exceeds grid");
    Eigen::VectorXcd full;
    detail::fft(g.values, full, -1);
    return HardySymbol{full.head(N) / static_cast<double>(M)};
}

HardySymbol szego_project(const Eigen::VectorXcd& two_sided, int K) {
    if (two_sided.size() != 2 * static_cast<long>(K) + 1)
        throw validation_error("two-sided coefficient list must have 2K+1 entries");
    return HardySymbol{two_sided.tail(K + 1)};
}

GridValues grid_multiply(const GridValues& a, const GridValues& b) {
    if (a.m_grid() != b.m_grid()) throw validation_error("grid size mismatch");
    return GridValues{a.values.cwiseProduct(b.values)};
}

double sobolev_norm(const HardySymbol& u, double s) {
    double acc = 0.0;
    for (int l = 0; l < u.n_modes(); ++l)
        acc += std::pow(1.0 + l, 2.0 * s) * std::norm(u.coeffs[l]);
    return std::sqrt(acc);
}

double mass(const HardySymbol& u) { return u.coeffs.squaredNorm(); }

Eigen::VectorXcd abs_sq_two_sided(const HardySymbol& u, int M) {
    const int N = u.n_modes();
    if (M < 4 * N) throw validation_error("dealiasing needs grid >= 4x modes");
    GridValues g = eval_grid(u, M);
    Eigen::VectorXcd sq(M);
    for (int m = 0; m < M; ++m) sq[m] = cd(std::norm(g.values[m]), 0.0);
    Eigen::VectorXcd hat;
    detail::fft(sq, hat, -1);
    hat /= static_cast<double>(M);
    Eigen::VectorXcd out(2 * N - 1);
    for (int j = -(N - 1); j <= N - 1; ++j) out[j + N - 1] = hat[(j + M) % M];
    return out;
}

double energy(const HardySymbol& u, int M) {
    if (M < 4 * u.n_modes()) throw validation_error("energy grid must be >= 4x modes");
    GridValues g = eval_grid(u, M);
    double acc = 0.0;
    for (int m = 0; m < M; ++m) {
        const double a2 = std::norm(g.values[m]);
        acc += a2 * a2;
    }
    return 0.25 * acc / M;
}

HardySymbol from_rational(const std::vector<cd>& A, const std::vector<cd>& B, int N,
                          double* tail_bound) {
    if (B.empty() || std::abs(B[0] - cd(1.0, 0.0)) > 1e-14)
        throw validation_error("denominator must satisfy B(0)=1");
    if (N < 1) throw validation_error("mode count must be positive");
    if (A.empty()) throw validation_error("numerator must be nonempty");

    // denominator roots via companion matrix; all must be outside the closed disc
    int degB = static_cast<int>(B.size()) - 1;
    while (degB > 0 && std::abs(B[static_cast<size_t>(degB)]) < 1e-300) --degB;
    double min_root = std::numeric_limits<double>::infinity();
    if (degB > 0) {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(degB, degB);
        for (int i = 1; i < degB; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < degB; ++i) comp(i, degB - 1) = -B[static_cast<size_t>(i)] / B[static_cast<size_t>(degB)];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        for (int i = 0; i < degB; ++i) min_root = std::min(min_root, std::abs(es.eigenvalues()[i]));
        if (min_root <= 1.0 + 1e-12)
            throw validation_error("denominator root inside or on the closed unit disc");
    }

    // long division: c_k = A_k - sum_{j>=1} B_j c_{k-j}
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N);
    for (int k = 0; k < N; ++k) {
        cd acc = (k < static_cast<int>(A.size())) ? A[static_cast<size_t>(k)] : cd{0.0, 0.0};
        for (int j = 1; j <= std::min(k, degB); ++j) acc -= B[static_cast<size_t>(j)] * c[k - j];
        c[k] = acc;
    }

    if (tail_bound) {
        *tail_bound = (degB > 0) ? std::abs(c[N - 1]) / (min_root - 1.0) : 0.0;
    }
    return HardySymbol{std::move(c)};
}

} // namespace szego
