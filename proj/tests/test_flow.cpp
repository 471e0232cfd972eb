#include "doctest.h"

#include <cmath>
#include <random>

#include "szego/flow.hpp"
#include "test_util.hpp"

using namespace szego;
using testutil::grid_for;
using testutil::random_spectral;
using testutil::resolve;

namespace {

SpectralData flat(std::vector<double> s) {
    SpectralData sd;
    sd.s = std::move(s);
    sd.psi.assign(sd.s.size(), make_blaschke(0.0));
    return sd;
}

double angle_dist(double a, double b) {
    return std::abs(std::remainder(a - b, 2.0 * pi));
}

} // namespace

TEST_CASE("evolve_exact rotates phases with alternating signs") {
    const SpectralData sd = flat({1.0, 0.5});
    CHECK(evolve_exact(sd, 0.0).psi[0].angle == sd.psi[0].angle);
    const double t = 0.37;
    const SpectralData out = evolve_exact(sd, t);
    CHECK(out.s == sd.s);
    // odd positions gain e^{-i s^2 t} (stored angle increases), even the reverse
    CHECK(angle_dist(out.psi[0].angle, sd.psi[0].angle + t) < 1e-14);
    CHECK(angle_dist(out.psi[1].angle, sd.psi[1].angle - 0.25 * t) < 1e-14);
}

TEST_CASE("rank-one data at t = pi/4 flips sign") {
    SpectralData c;
    c.s = {2.0};
    c.psi = {make_blaschke(0.9)};
    const HardySymbol u0 = inverse(c, 64, 4);
    const HardySymbol ut = inverse(evolve_exact(c, pi / 4.0), 64, 4);
    CHECK(std::abs(ut.coeff(0) + u0.coeff(0)) < 1e-13);
}

TEST_CASE("the shift monomial rotates as e^{-it} z") {
    const SpectralData sd = forward(make_symbol({cd{0, 0}, cd{1, 0}}));
    const HardySymbol ut = inverse(evolve_exact(sd, 1.2), 64, 4);
    CHECK(std::abs(ut.coeff(1) - std::polar(1.0, -1.2)) < 1e-9);
}

TEST_CASE("szego_rhs closed forms") {
    const HardySymbol c = make_symbol({cd{0.6, 0.3}});
    const HardySymbol rc = szego_rhs(c);
    const cd expect = cd{0, -1} * std::norm(c.coeff(0)) * c.coeff(0);
    CHECK(std::abs(rc.coeff(0) - expect) < 1e-15);

    const HardySymbol z = make_symbol({cd{0, 0}, cd{1, 0}});
    const HardySymbol rz = szego_rhs(z);
    CHECK(std::abs(rz.coeff(1) - cd{0, -1}) < 1e-14);
    CHECK(std::abs(rz.coeff(0)) < 1e-14);

    const HardySymbol zero = make_symbol({cd{0, 0}, cd{0, 0}});
    CHECK(szego_rhs(zero).coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("szego_rhs validates the dealiasing bound") {
    const HardySymbol u = make_symbol({cd{1, 0}, cd{0.5, 0}, cd{0.1, 0}, cd{0.05, 0}});
    CHECK_THROWS_AS((void)szego_rhs(u, 8), validation_error);
    CHECK_NOTHROW((void)szego_rhs(u, 16));
}

TEST_CASE("integrate_direct reproduces the constant-data rotation") {
    const HardySymbol c = make_symbol({cd{0.7, 0}});
    const TrajectoryRecord traj = integrate_direct(c, 1.0, 1e-3);
    const HardySymbol& uT = traj.states.back();
    const cd expect = std::polar(0.7, -0.49 * 1.0);
    CHECK(std::abs(uT.coeff(0) - expect) < 1e-9);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate_direct rejects steps violating the stability bound") {
    const HardySymbol c = make_symbol({cd{2.0, 0}});
    CHECK_THROWS_AS((void)integrate_direct(c, 1.0, 0.05), validation_error);
}

TEST_CASE("exact flow and RK4 agree on a rank-two rational symbol") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const HardySymbol u0 = inverse(sd, 256, 48);
    const TrajectoryRecord traj = integrate_direct(u0, 1.0, 1e-3);
    const HardySymbol exact = inverse(evolve_exact(sd, 1.0), 256, 48);
    double l2 = 0.0;
    for (int k = 0; k < 48; ++k) l2 += std::norm(traj.states.back().coeff(k) - exact.coeff(k));
    CHECK(std::sqrt(l2) < 1e-9);

    const DriftSummary drift = invariant_report(traj);
    CHECK(drift.mass < 1e-12);
    CHECK(drift.energy < 1e-12);
    CHECK(drift.s_drift < 1e-10);
}

TEST_CASE("RK4 terminal error decays at fourth order") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const HardySymbol u0 = inverse(sd, 256, 48);
    const HardySymbol exact = inverse(evolve_exact(sd, 1.0), 256, 48);
    auto terminal_err = [&](double dt) {
        const TrajectoryRecord traj = integrate_direct(u0, 1.0, dt);
        double l2 = 0.0;
        for (int k = 0; k < 48; ++k)
            l2 += std::norm(traj.states.back().coeff(k) - exact.coeff(k));
        return std::sqrt(l2);
    };
    const double e1 = terminal_err(8e-3);
    const double e2 = terminal_err(4e-3);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.8);
    CHECK(order < 4.2);
}

TEST_CASE("hierarchy value: product equals resolvent") {
    const SpectralData sd = flat({1.0, 0.5});
    const HardySymbol u = inverse(sd, 256, 48);
    const HierarchyEval he = j_y(u, 1.0, &sd);
    REQUIRE(he.has_product);
    CHECK(he.j_product == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(std::abs(he.j_resolvent - 0.625) < 1e-10);
    REQUIRE(he.omegas.size() == 2);
    CHECK(he.omegas[0] == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(he.omegas[1] == doctest::Approx(-1.0).epsilon(1e-12));

    // rank one: J = 1/(1 + y|c|^2), omega_1 = 2yJ/(1 + y c^2)
    SpectralData rc = flat({2.0});
    const HardySymbol uc = inverse(rc, 64, 4);
    const HierarchyEval hc = j_y(uc, 1.0, &rc);
    CHECK(std::abs(hc.j_resolvent - 0.2) < 1e-12);
    CHECK(hc.j_product == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(hc.omegas[0] == doctest::Approx(0.08).epsilon(1e-12));

    // y -> 0 limit
    CHECK(std::abs(j_y(u, 1e-9).j_resolvent - 1.0) < 1e-8);
    CHECK_THROWS_AS((void)j_y(u, -1.0), validation_error);
}

TEST_CASE("resolvent and product forms agree on random data") {
    std::mt19937_64 gen(71);
    for (int rep = 0; rep < 5; ++rep) {
        const SpectralData sd = random_spectral(gen, 3, 1);
        const HardySymbol u = resolve(sd);
        const double y = 0.2 + 2.0 * canonical_uniform(gen);
        const HierarchyEval he = j_y(u, y, &sd);
        CHECK(std::abs(he.j_resolvent - he.j_product) < 1e-10);
        CHECK(he.j_resolvent > 0.0);
        CHECK(he.j_resolvent <= 1.0 + 1e-12);
    }
}

TEST_CASE("hierarchy_evolve_exact rotates by the omega frequencies") {
    const SpectralData sd = flat({1.0, 0.5});
    const double t = 0.83;
    const SpectralData out = hierarchy_evolve_exact(sd, 1.0, t);
    // Psi_r multiplied by e^{i omega_r t}: stored angle decreases by omega_r t
    CHECK(std::abs(std::remainder(out.psi[0].angle - (sd.psi[0].angle - 0.625 * t), 2.0 * pi)) <
          1e-13);
    CHECK(std::abs(std::remainder(out.psi[1].angle - (sd.psi[1].angle + 1.0 * t), 2.0 * pi)) <
          1e-13);
    CHECK(hierarchy_evolve_exact(sd, 1.0, 0.0).psi[0].angle == sd.psi[0].angle);
}

TEST_CASE("direct hierarchy flow conserves the spectrum and matches the exact flow") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const HardySymbol u0 = inverse(sd, 256, 48);
    const double y = 1.0;
    const TrajectoryRecord traj = integrate_hierarchy_direct(u0, y, 1.0, 1e-3);
    const DriftSummary drift = invariant_report(traj);
    CHECK(drift.s_drift < 1e-8);
    CHECK(drift.mass < 1e-8);

    // J^y constant along the trajectory
    const double j0 = j_y(traj.states.front(), y).j_resolvent;
    const double jT = j_y(traj.states.back(), y).j_resolvent;
    CHECK(std::abs(jT - j0) < 1e-10);

    const HardySymbol exact = inverse(hierarchy_evolve_exact(sd, y, 1.0), 256, 48);
    double l2 = 0.0;
    for (int k = 0; k < 48; ++k) l2 += std::norm(traj.states.back().coeff(k) - exact.coeff(k));
    CHECK(std::sqrt(l2) < 1e-6);
}

TEST_CASE("measured phase rates match the hierarchy frequencies") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const HardySymbol u0 = inverse(sd, 256, 48);
    const double y = 1.0, T = 1.0;
    const HierarchyEval he = j_y(u0, y, &sd);
    const TrajectoryRecord traj = integrate_hierarchy_direct(u0, y, T, 1e-3);
    const SpectralData sdT = forward(traj.states.back(), ForwardOptions{48});
    REQUIRE(sdT.n() == sd.n());
    for (int r = 0; r < sd.n(); ++r) {
        const size_t i = static_cast<size_t>(r);
        // Psi_r gains e^{i omega_r t}, so the stored angle moves by -omega_r T
        const double measured = std::remainder(sdT.psi[i].angle - sd.psi[i].angle, 2.0 * pi) / T;
        CHECK(std::abs(measured + he.omegas[i]) < 1e-4);
    }
}

TEST_CASE("cubic-flow phase rates measured from the direct integrator") {
    const SpectralData sd = forward(make_symbol({cd{1, 0}, cd{0.5, 0}}));
    const HardySymbol u0 = inverse(sd, 256, 48);
    const double T = 1.0;
    const TrajectoryRecord traj = integrate_direct(u0, T, 1e-3);
    const SpectralData sdT = forward(traj.states.back(), ForwardOptions{48});
    for (int r = 0; r < sd.n(); ++r) {
        const size_t i = static_cast<size_t>(r);
        const double measured = std::remainder(sdT.psi[i].angle - sd.psi[i].angle, 2.0 * pi) / T;
        const double sign = (r % 2 == 0) ? 1.0 : -1.0; // 1-based odd positions
        CHECK(std::abs(measured - sign * sd.s[i] * sd.s[i]) < 1e-4);
    }
}

TEST_CASE("invariant_report on a constant solution is flat") {
    const TrajectoryRecord traj = integrate_direct(make_symbol({cd{0.5, 0}}), 1.0, 1e-2);
    const DriftSummary drift = invariant_report(traj);
    CHECK(drift.mass < 1e-14);
    CHECK(drift.energy < 1e-14);
    CHECK(drift.h_half < 1e-14);
}
