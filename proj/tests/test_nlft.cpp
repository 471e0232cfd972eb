#include "doctest.h"

#include <cmath>
#include <random>

#include "szego/nlft.hpp"
#include "test_util.hpp"

using namespace szego;
using testutil::grid_for;
using testutil::random_spectral;
using testutil::rel_sobolev_err;
using testutil::resolve;

namespace {

SpectralData flat(std::vector<double> s) {
    SpectralData sd;
    sd.s = std::move(s);
    sd.psi.assign(sd.s.size(), make_blaschke(0.0));
    return sd;
}

} // namespace

TEST_CASE("validate enforces ordering, gaps, and matching sizes") {
    CHECK_NOTHROW(validate(SpectralData{}));
    CHECK_NOTHROW(validate(flat({1.0, 0.5})));
    CHECK_THROWS_AS(validate(flat({0.5, 1.0})), validation_error);
    CHECK_THROWS_AS(validate(flat({1.0, 1.0 - 1e-12})), validation_error);
    CHECK_THROWS_AS(validate(flat({1.0, 0.0})), validation_error);
    SpectralData bad = flat({1.0, 0.5});
    bad.psi.pop_back();
    CHECK_THROWS_AS(validate(bad), validation_error);
}

TEST_CASE("inverse oracle: the one-by-one system in closed form") {
    const HardySymbol u = inverse(flat({1.0, 0.5}), 256, 48);
    for (int k = 0; k < 48; ++k)
        CHECK(std::abs(u.coeff(k) - 0.75 * std::pow(0.5, k)) < 1e-12);
}

TEST_CASE("inverse of rank-one data is the scaled inner function") {
    SpectralData c;
    c.s = {2.0};
    c.psi = {make_blaschke(pi / 2)};
    const HardySymbol u = inverse(c, 64, 8);
    CHECK(std::abs(u.coeff(0) - cd{0, -2}) < 1e-13);
    for (int k = 1; k < 8; ++k) CHECK(std::abs(u.coeff(k)) < 1e-13);

    SpectralData zdata;
    zdata.s = {1.0};
    zdata.psi = {make_blaschke(0.0, {cd{0, 0}})};
    const HardySymbol uz = inverse(zdata, 64, 8);
    CHECK(std::abs(uz.coeff(1) - cd{1, 0}) < 1e-13);
    CHECK(std::abs(uz.coeff(0)) < 1e-13);
}

TEST_CASE("forward oracle: two modes against the symmetric eigenproblem") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    REQUIRE(sd.n() == 3);
    CHECK(std::abs(sd.s[0] - (1.0 + std::sqrt(2.0)) / 2.0) < 1e-10);
    CHECK(std::abs(sd.s[1] - 0.5) < 1e-10);
    CHECK(std::abs(sd.s[2] - (std::sqrt(2.0) - 1.0) / 2.0) < 1e-10);
    // Psi = (1, 1, -1) as boundary values
    for (int r = 0; r < 3; ++r) {
        REQUIRE(sd.psi[static_cast<size_t>(r)].degree() == 0);
        const cd want = r == 2 ? cd{-1, 0} : cd{1, 0};
        CHECK(std::abs(eval(sd.psi[static_cast<size_t>(r)], cd{1, 0}) - want) < 1e-7);
    }
}

TEST_CASE("forward of the shift monomial produces the degree-one inner factor") {
    const SpectralData sd = forward(make_symbol({cd{0, 0}, cd{1, 0}}));
    REQUIRE(sd.n() == 1);
    CHECK(std::abs(sd.s[0] - 1.0) < 1e-12);
    REQUIRE(sd.psi[0].degree() == 1);
    CHECK(std::abs(sd.psi[0].zeros[0]) < 1e-9);
    CHECK(std::abs(std::remainder(sd.psi[0].angle, 2.0 * pi)) < 1e-9);
}

TEST_CASE("forward rejects the zero symbol") {
    CHECK_THROWS_AS((void)forward(make_symbol({cd{0, 0}, cd{0, 0}})), validation_error);
}

TEST_CASE("build_C closed forms and the diagonal scaling to build_Csharp") {
    const SpectralData sd = flat({1.0, 0.5});
    CHECK(std::abs(build_C(sd, cd{0, 0})(0, 0) - cd{1.0 / 0.75, 0}) < 1e-14);
    CHECK(std::abs(build_C(sd, cd{1, 0})(0, 0) - cd{2.0 / 3.0, 0}) < 1e-14);

    SpectralData odd = flat({1.0});
    CHECK(std::abs(build_C(odd, cd{0.3, 0.4})(0, 0) - cd{1, 0}) < 1e-14);

    SpectralData zdata;
    zdata.s = {1.0};
    zdata.psi = {make_blaschke(0.0, {cd{0, 0}})};
    CHECK(std::abs(build_Csharp(zdata, cd{0.7, 0})(0, 0) - cd{1, 0}) < 1e-14);

    std::mt19937_64 gen(41);
    for (int rep = 0; rep < 8; ++rep) {
        const SpectralData r = random_spectral(gen);
        const cd z = std::polar(0.9 * canonical_uniform(gen), 2.0 * pi * canonical_uniform(gen));
        const int q = r.q();
        Eigen::MatrixXcd dodd = Eigen::MatrixXcd::Zero(q, q);
        Eigen::MatrixXcd deven = Eigen::MatrixXcd::Zero(q, q);
        for (int j = 0; j < q; ++j) {
            dodd(j, j) = 1.0 / eval_poly(monic_pair(r.psi[static_cast<size_t>(2 * j)]).d, z);
            const bool virt = 2 * j + 1 >= r.n();
            deven(j, j) =
                virt ? cd{1, 0}
                     : 1.0 / eval_poly(monic_pair(r.psi[static_cast<size_t>(2 * j + 1)]).d, z);
        }
        const Eigen::MatrixXcd lhs = build_C(r, z);
        const Eigen::MatrixXcd rhs = dodd * build_Csharp(r, z) * deven;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * lhs.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("inverse_point matches the grid synthesis") {
    std::mt19937_64 gen(43);
    const SpectralData sd = random_spectral(gen);
    const HardySymbol u = resolve(sd);
    for (int m = 0; m < 5; ++m) {
        const cd z = std::polar(1.0, 2.0 * pi * (m + 0.21) / 5.0);
        CHECK(std::abs(inverse_point(sd, z) - eval_point(u, z)) < 1e-9);
    }
    CHECK(std::abs(inverse_point(sd, cd{0.3, -0.2}) - eval_point(u, cd{0.3, -0.2})) < 1e-9);
}

TEST_CASE("sigma and rho component lists both sum to the symbol value") {
    std::mt19937_64 gen(47);
    for (int rep = 0; rep < 6; ++rep) {
        const SpectralData sd = random_spectral(gen);
        const cd z = std::polar(0.95, 2.0 * pi * canonical_uniform(gen));
        const cd at = inverse_point(sd, z);
        const std::vector<cd> us = components_sigma(sd, z);
        const std::vector<cd> ur = components_rho(sd, z);
        cd sum_s{0, 0}, sum_r{0, 0};
        for (const cd& v : us) sum_s += v;
        for (const cd& v : ur) sum_r += v;
        CHECK(std::abs(sum_s - at) < 1e-10 * (1.0 + std::abs(at)));
        CHECK(std::abs(sum_r - at) < 1e-10 * (1.0 + std::abs(at)));
    }
}

TEST_CASE("norming constants in closed form") {
    const NormingConstants nc = norming_constants(flat({1.0, 0.5}));
    REQUIRE(nc.tau_sq.size() == 1);
    REQUIRE(nc.kappa_sq.size() == 1);
    CHECK(nc.tau_sq[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(nc.kappa_sq[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(!nc.has_kappa0);

    const NormingConstants n1 = norming_constants(flat({1.0}));
    CHECK(n1.tau_sq[0] == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(n1.has_kappa0);
    CHECK(n1.kappa0_sq == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norming constants of the forward oracle satisfy the simple sum rule") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const NormingConstants nc = norming_constants(sd);
    REQUIRE(nc.tau_sq.size() == 2);
    double sum = 0.0;
    for (size_t j = 0; j < 2; ++j)
        sum += nc.tau_sq[j] / (sd.s[2 * j] * sd.s[2 * j] - 0.25);
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("projection norms match the closed-form norming constants") {
    std::mt19937_64 gen(53);
    for (int rep = 0; rep < 4; ++rep) {
        const SpectralData sd = random_spectral(gen, 3, 1);
        const NormingConstants nc = norming_constants(sd);
        const HardySymbol u = resolve(sd);
        const HankelPair pair = build_pair(u);
        const auto ch = spectral_clusters(pair, OperatorSide::H);
        const auto ck = spectral_clusters(pair, OperatorSide::K);
        for (size_t j = 0; 2 * j < static_cast<size_t>(sd.n()); ++j) {
            const double target = sd.s[2 * j];
            double got = -1.0;
            for (const auto& c : ch)
                if (std::abs(c.s - target) < 1e-6 * sd.s[0]) got = c.norm_sq;
            REQUIRE(got >= 0.0);
            CHECK(std::abs(got - nc.tau_sq[j]) < 1e-8 * nc.tau_sq[j]);
        }
        for (size_t k = 0; 2 * k + 1 < static_cast<size_t>(sd.n()); ++k) {
            const double target = sd.s[2 * k + 1];
            double got = -1.0;
            for (const auto& c : ck)
                if (std::abs(c.s - target) < 1e-6 * sd.s[0]) got = c.norm_sq;
            REQUIRE(got >= 0.0);
            CHECK(std::abs(got - nc.kappa_sq[k]) < 1e-8 * nc.kappa_sq[k]);
        }
    }
}

TEST_CASE("bateman identities vanish on random data") {
    std::mt19937_64 gen(59);
    for (int rep = 0; rep < 20; ++rep) {
        const SpectralData sd = random_spectral(gen);
        const BatemanReport rep_out = bateman_check(sd, norming_constants(sd));
        CHECK(rep_out.max_residual() < 1e-10);
    }
}

TEST_CASE("bateman nu identity closed forms") {
    const BatemanReport a = bateman_check(flat({1.0, 0.5}), norming_constants(flat({1.0, 0.5})));
    CHECK(a.nu_sum < 1e-14); // 1 - 0.75/1 = 0.25 = sigma^2/rho^2 exactly
    const BatemanReport b = bateman_check(flat({1.0}), norming_constants(flat({1.0})));
    CHECK(b.nu_sum < 1e-14); // 1 - 1 = 0, empty product with sigma = 0
}

TEST_CASE("kernel diagnostic classifies finite and truncated data") {
    CHECK(kernel_diagnostic(flat({1.0, 0.5})).kind == KernelKind::nontrivial);
    std::vector<double> s(20);
    for (int r = 0; r < 20; ++r) s[static_cast<size_t>(r)] = std::pow(2.0, -r);
    const KernelDiagnostic d = kernel_diagnostic(flat(s), true);
    CHECK(d.kind == KernelKind::undetermined);
    CHECK(d.prod_rho > 0.0);
    CHECK(d.prod_rho < 1.0);
    CHECK(d.prod_sigma > 1.0);
    CHECK_THROWS_AS((void)kernel_diagnostic(SpectralData{}), validation_error);
}

TEST_CASE("roundtrip A: analysis inverts synthesis for rational symbols") {
    double tail = 0.0;
    const HardySymbol u =
        from_rational({cd{1, 0}, cd{0.3, 0.1}}, {cd{1, 0}, cd{-0.5, 0.2}}, 96, &tail);
    REQUIRE(tail < 1e-12);
    const SpectralData sd = forward(u);
    const HardySymbol back = inverse(sd, grid_for(96), 96);
    CHECK(rel_sobolev_err(back, u, 0.5) < 1e-8);
}

TEST_CASE("roundtrip B: synthesis inverts analysis for random spectral data") {
    std::mt19937_64 gen(61);
    for (int rep = 0; rep < 6; ++rep) {
        const SpectralData sd = random_spectral(gen, 3, 2);
        const HardySymbol u = resolve(sd);
        const SpectralData back = forward(u, ForwardOptions{u.n_modes()});
        REQUIRE(back.n() == sd.n());
        for (int r = 0; r < sd.n(); ++r) {
            const size_t i = static_cast<size_t>(r);
            CHECK(std::abs(back.s[i] - sd.s[i]) < 1e-8 * sd.s[0]);
            REQUIRE(back.psi[i].degree() == sd.psi[i].degree());
            for (int m = 0; m < 8; ++m) {
                const cd z = std::polar(1.0, 2.0 * pi * (m + 0.3) / 8.0);
                CHECK(std::abs(eval(back.psi[i], z) - eval(sd.psi[i], z)) < 1e-7);
            }
        }
    }
}

TEST_CASE("inverse reports invertibility of the grid systems") {
    std::mt19937_64 gen(67);
    const SpectralData sd = random_spectral(gen);
    InverseReport rep{};
    (void)inverse(sd, 512, 64, &rep);
    CHECK(rep.min_abs_det > 0.0);
    CHECK(rep.max_condition >= 1.0);
    CHECK(std::isfinite(rep.max_condition));
    CHECK(rep.tail_energy >= 0.0);
}

TEST_CASE("truncation convergence of partial inverses") {
    // s_r = 0.5 * 2^{-r}: successive odd-length truncations converge in H^{1/2}
    std::vector<double> s_all(25);
    for (int r = 0; r < 25; ++r) s_all[static_cast<size_t>(r)] = 0.5 * std::pow(2.0, -(r + 1));
    HardySymbol last;
    std::vector<double> diffs;
    for (int q = 1; q <= 12; ++q) {
        const int n_entries = 2 * q - 1;
        const SpectralData sd =
            flat(std::vector<double>(s_all.begin(), s_all.begin() + n_entries));
        const HardySymbol u = inverse(sd, 256, 64);
        if (q > 1) diffs.push_back(sobolev_norm(testutil::diff_symbol(u, last), 0.5));
        last = u;
    }
    for (size_t i = 1; i < diffs.size(); ++i) CHECK(diffs[i] < diffs[i - 1]);
    CHECK(diffs.back() < 1e-6);
}
