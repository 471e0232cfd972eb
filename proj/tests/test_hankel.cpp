#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "szego/hankel.hpp"
#include "szego/nlft.hpp"
#include "test_util.hpp"

using namespace szego;
using testutil::next_pow2;

namespace {

HardySymbol random_bandlimited(std::mt19937_64& gen, int n_modes, int bandwidth) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_modes);
    double scale = 1.0;
    for (int k = 0; k < bandwidth; ++k) {
        c[k] = scale * cd{2.0 * canonical_uniform(gen) - 1.0, 2.0 * canonical_uniform(gen) - 1.0};
        scale *= 0.8;
    }
    return make_symbol(std::move(c));
}

Eigen::VectorXd descending_eigs(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

} // namespace

TEST_CASE("build_pair lays out the shifted coefficient tables") {
    const HankelPair p = build_pair(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    REQUIRE(p.dim() == 2);
    CHECK(p.gamma(0, 0) == cd{1, 0});
    CHECK(p.gamma(0, 1) == cd{0.5, 0});
    CHECK(p.gamma(1, 0) == cd{0.5, 0});
    CHECK(p.gamma(1, 1) == cd{0, 0});
    CHECK(p.gamma_shift(0, 0) == cd{0.5, 0});
    CHECK(p.gamma_shift(1, 1) == cd{0, 0});

    const HankelPair pz = build_pair(make_symbol({cd{0, 0}, cd{1, 0}}));
    CHECK(pz.gamma(0, 1) == cd{1, 0});
    CHECK(pz.gamma_shift(0, 0) == cd{1, 0});
    CHECK(pz.gamma_shift(0, 1) == cd{0, 0});
}

TEST_CASE("both matrices are symmetric and zero for the zero symbol") {
    std::mt19937_64 gen(2);
    const HankelPair p = build_pair(random_bandlimited(gen, 16, 16));
    CHECK((p.gamma - p.gamma.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.gamma_shift - p.gamma_shift.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const HankelPair z = build_pair(make_symbol({cd{0, 0}, cd{0, 0}}));
    CHECK(z.gamma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shifted square drops the rank-one piece: K^2 = H^2 - u u^H") {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 5; ++rep) {
        const HardySymbol u = random_bandlimited(gen, 24, 24);
        const HankelPair p = build_pair(u);
        const Eigen::MatrixXcd h2 = p.gamma * p.gamma.adjoint();
        const Eigen::MatrixXcd k2 = p.gamma_shift * p.gamma_shift.adjoint();
        const Eigen::MatrixXcd resid = k2 - (h2 - u.coeffs * u.coeffs.adjoint());
        CHECK(resid.cwiseAbs().maxCoeff() < 1e-12 * h2.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("toeplitz_matrix from the two-sided coefficients of |u|^2") {
    const HardySymbol u = make_symbol({cd{1, 0}, cd{1, 0}});
    const Eigen::MatrixXcd t = toeplitz_matrix(abs_sq_two_sided(u, 64), 3);
    for (int n = 0; n < 3; ++n)
        for (int q = 0; q < 3; ++q) {
            const int diag = n - q;
            const cd want = diag == 0 ? cd{2, 0} : (std::abs(diag) == 1 ? cd{1, 0} : cd{0, 0});
            CHECK(std::abs(t(n, q) - want) < 1e-14);
        }
    // constant symbol: |c|^2 I
    const Eigen::MatrixXcd tc = toeplitz_matrix(abs_sq_two_sided(make_symbol({cd{0, 2}}), 64), 4);
    CHECK((tc - 4.0 * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cubic identities for the Hankel pair of Pi(|u|^2 u)") {
    std::mt19937_64 gen(13);
    const int n = 32;
    const int M = next_pow2(6 * n); // alias-free through the cubic bandwidth
    for (int rep = 0; rep < 3; ++rep) {
        const HardySymbol u = random_bandlimited(gen, n, n / 4);
        const GridValues g = eval_grid(u, M);
        GridValues cubic = g;
        for (int m = 0; m < M; ++m) cubic.values[m] *= std::norm(g.values[m]);
        const HardySymbol u3 = grid_to_symbol(cubic, 2 * n - 1);
        const HankelPair pu = build_pair(u);
        const HankelPair p3 = build_pair(u3, n);
        const Eigen::MatrixXcd tb = toeplitz_matrix(abs_sq_two_sided(u, M), n);

        const Eigen::MatrixXcd rhs_h =
            tb * pu.gamma + pu.gamma * tb.transpose() - pu.gamma * pu.gamma.adjoint() * pu.gamma;
        const double scale = rhs_h.cwiseAbs().maxCoeff();
        CHECK((p3.gamma - rhs_h).cwiseAbs().maxCoeff() < 1e-10 * scale);

        const Eigen::MatrixXcd rhs_k = tb * pu.gamma_shift + pu.gamma_shift * tb.transpose() -
                                       pu.gamma_shift * pu.gamma_shift.adjoint() * pu.gamma_shift;
        CHECK((p3.gamma_shift - rhs_k).cwiseAbs().maxCoeff() < 1e-10 * scale);
    }
}

TEST_CASE("H^2 and K^2 eigenvalues interlace") {
    std::mt19937_64 gen(19);
    const HardySymbol u = random_bandlimited(gen, 16, 16);
    const HankelPair p = build_pair(u);
    const Eigen::VectorXd lh = descending_eigs(p.gamma * p.gamma.adjoint());
    const Eigen::VectorXd lk = descending_eigs(p.gamma_shift * p.gamma_shift.adjoint());
    const double tol = 1e-12 * lh[0];
    for (int k = 0; k < 16; ++k) {
        CHECK(lh[k] >= lk[k] - tol);
        if (k + 1 < 16) CHECK(lk[k] >= lh[k + 1] - tol);
    }
}

TEST_CASE("spectral_clusters on the two-mode oracle symbol") {
    const HankelPair p = build_pair(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const auto ch = spectral_clusters(p, OperatorSide::H);
    REQUIRE(ch.size() == 2);
    CHECK(ch[0].s == doctest::Approx((std::sqrt(2.0) + 1.0) / 2.0).epsilon(1e-12));
    CHECK(ch[1].s == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-12));
    CHECK(ch[0].mult == 1);
    CHECK(!ch[0].kernel);

    const auto ck = spectral_clusters(p, OperatorSide::K);
    REQUIRE(ck.size() == 2);
    CHECK(ck[0].s == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ck[1].kernel);
}

TEST_CASE("a shifted monomial has a multiplicity-two top cluster") {
    const HankelPair p = build_pair(make_symbol({cd{0, 0}, cd{1, 0}}));
    const auto ch = spectral_clusters(p, OperatorSide::H);
    REQUIRE(ch.size() == 1);
    CHECK(ch[0].s == doctest::Approx(1.0));
    CHECK(ch[0].mult == 2);
    // basis orthonormal
    const Eigen::MatrixXcd g = ch[0].basis.adjoint() * ch[0].basis;
    CHECK((g - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral_clusters rejects out-of-range tolerances") {
    const HankelPair p = build_pair(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    CHECK_THROWS_AS((void)spectral_clusters(p, OperatorSide::H, 0.5), validation_error);
    CHECK_THROWS_AS((void)spectral_clusters(p, OperatorSide::H, 0.0), validation_error);
}

TEST_CASE("cluster projections reassemble the symbol") {
    std::mt19937_64 gen(23);
    const HardySymbol u = random_bandlimited(gen, 12, 12);
    const HankelPair p = build_pair(u);
    const auto clusters = spectral_clusters(p, OperatorSide::H);
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(u.n_modes());
    for (const auto& c : clusters)
        for (int k = 0; k < c.u_proj.n_modes(); ++k) sum[k] += c.u_proj.coeff(k);
    CHECK((sum - u.coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dominance_split interlaces the two-mode oracle") {
    const HardySymbol u = make_symbol({cd{1, 0}, cd{0.5, 0}});
    const HankelPair p = build_pair(u);
    const SpectralSkeleton sk = dominance_split(u, spectral_clusters(p, OperatorSide::H),
                                                spectral_clusters(p, OperatorSide::K));
    REQUIRE(sk.entries.size() == 3);
    CHECK(sk.entries[0].side == OperatorSide::H);
    CHECK(sk.entries[1].side == OperatorSide::K);
    CHECK(sk.entries[2].side == OperatorSide::H);
    CHECK(sk.entries[0].s == doctest::Approx((std::sqrt(2.0) + 1.0) / 2.0));
    CHECK(sk.entries[1].s == doctest::Approx(0.5));
    CHECK(sk.entries[2].s == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0));
    CHECK(sk.mult_pairing_ok);
    for (const auto& e : sk.entries) {
        CHECK(e.mult == 1);
        CHECK(e.other_mult == 0);
    }
}

TEST_CASE("dominance_split on rank-one symbols") {
    const HardySymbol c = make_symbol({cd{0, -2}});
    const HankelPair pc = build_pair(c);
    const SpectralSkeleton sk = dominance_split(c, spectral_clusters(pc, OperatorSide::H),
                                                spectral_clusters(pc, OperatorSide::K));
    REQUIRE(sk.entries.size() == 1);
    CHECK(sk.entries[0].s == doctest::Approx(2.0));

    const HardySymbol z = make_symbol({cd{0, 0}, cd{1, 0}});
    const HankelPair pz = build_pair(z);
    const SpectralSkeleton skz = dominance_split(z, spectral_clusters(pz, OperatorSide::H),
                                                 spectral_clusters(pz, OperatorSide::K));
    REQUIRE(skz.entries.size() == 1);
    CHECK(skz.entries[0].s == doctest::Approx(1.0));
    CHECK(skz.entries[0].mult == 2);
    CHECK(skz.entries[0].other_mult == 1);
    CHECK(skz.mult_pairing_ok);
}

TEST_CASE("eigenspace action on a multiplicity-two cluster") {
    // s = (1, 0.3) with a degree-1 inner factor: the top H-eigenspace has
    // dimension two and the action sends z^a/D f to s e^{-i psi} z^{1-a}/D f.
    SpectralData sd;
    sd.s = {1.0, 0.3};
    sd.psi = {make_blaschke(0.7, {cd{0.4, 0.0}}), make_blaschke(0.0)};
    const HardySymbol u = inverse(sd, 512, 64);
    const HankelPair pair = build_pair(u);
    const auto clusters = spectral_clusters(pair, OperatorSide::H);
    REQUIRE(clusters.size() >= 1);
    const EigenCluster& top = clusters[0];
    REQUIRE(top.mult == 2);

    const HardySymbol f = apply_hankel(pair, top.u_proj);
    const MonicPair mp = monic_pair(sd.psi[0]);
    const int M = 512;
    const GridValues fg = eval_grid(f, M);
    auto basis_fn = [&](int a) {
        GridValues g = fg;
        for (int m = 0; m < M; ++m) {
            const cd z = std::polar(1.0, 2.0 * pi * m / M);
            g.values[m] *= std::pow(z, a) / eval_poly(mp.d, z);
        }
        return grid_to_symbol(g, 64);
    };
    const double s = top.s;
    const double psi_angle = sd.psi[0].angle;
    for (int a = 0; a <= 1; ++a) {
        const HardySymbol lhs = apply_hankel(pair, basis_fn(a));
        const HardySymbol rhs_base = basis_fn(1 - a);
        Eigen::VectorXcd want(64);
        for (int k = 0; k < 64; ++k)
            want[k] = s * std::polar(1.0, -psi_angle) * rhs_base.coeff(k);
        Eigen::VectorXcd got(64);
        for (int k = 0; k < 64; ++k) got[k] = lhs.coeff(k);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("forward refuses a truncation that leaves the rank unresolved") {
    Eigen::VectorXcd slow(32);
    for (int k = 0; k < 32; ++k) slow[k] = std::pow(0.95, k);
    CHECK_THROWS_AS((void)forward(make_symbol(std::move(slow))), validation_error);
}
