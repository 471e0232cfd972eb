#include "szego/rational_poles.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace szego {

namespace {

using qc = __complex128;

qc make_qc(double re, double im) {
    qc z;
    __real__ z = re;
    __imag__ z = im;
    return z;
}

__float128 abs_sq(qc z) { return __real__ z * __real__ z + __imag__ z * __imag__ z; }

qc circle_point(long m, long n) {
    const __float128 t = 2.0Q * M_PIq * m / n;
    qc z;
    __real__ z = cosq(t);
    __imag__ z = sinq(t);
    return z;
}

cd to_cd(qc z) { return cd{static_cast<double>(__real__ z), static_cast<double>(__imag__ z)}; }

// log(1 + a) without forming 1 + a, keeping tiny offsets exact
qc log1p_qc(qc a) {
    const __float128 ar = __real__ a, ai = __imag__ a;
    qc w;
    __real__ w = 0.5Q * log1pq(2.0Q * ar + ar * ar + ai * ai);
    __imag__ w = atan2q(ai, 1.0Q + ar);
    return w;
}

qc horner(const std::vector<qc>& coeffs, qc z) {
    qc acc = make_qc(0.0, 0.0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

qc horner_deriv(const std::vector<qc>& coeffs, qc z) {
    qc acc = make_qc(0.0, 0.0);
    for (size_t i = coeffs.size(); i-- > 1;) acc = acc * z + coeffs[i] * make_qc(static_cast<double>(i), 0.0);
    return acc;
}

// LU with partial pivoting; returns det and the solution of a x = b.
qc lu_solve(std::vector<qc> a, std::vector<qc> b, int n, qc* det_out) {
    qc det = make_qc(1.0, 0.0);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        __float128 best = abs_sq(a[static_cast<size_t>(col * n + col)]);
        for (int r = col + 1; r < n; ++r) {
            const __float128 v = abs_sq(a[static_cast<size_t>(r * n + col)]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0Q) throw numerical_error("singular system in extended-precision solve");
        if (piv != col) {
            for (int c2 = 0; c2 < n; ++c2)
                std::swap(a[static_cast<size_t>(piv * n + c2)], a[static_cast<size_t>(col * n + c2)]);
            std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
            det = -det;
        }
        const qc d = a[static_cast<size_t>(col * n + col)];
        det = det * d;
        for (int r = col + 1; r < n; ++r) {
            const qc f = a[static_cast<size_t>(r * n + col)] / d;
            if (abs_sq(f) == 0.0Q) continue;
            for (int c2 = col; c2 < n; ++c2)
                a[static_cast<size_t>(r * n + c2)] =
                    a[static_cast<size_t>(r * n + c2)] - f * a[static_cast<size_t>(col * n + c2)];
            b[static_cast<size_t>(r)] = b[static_cast<size_t>(r)] - f * b[static_cast<size_t>(col)];
        }
    }
    qc sum = make_qc(0.0, 0.0);
    std::vector<qc> x(static_cast<size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        qc v = b[static_cast<size_t>(r)];
        for (int c2 = r + 1; c2 < n; ++c2)
            v = v - a[static_cast<size_t>(r * n + c2)] * x[static_cast<size_t>(c2)];
        x[static_cast<size_t>(r)] = v / a[static_cast<size_t>(r * n + r)];
        sum = sum + x[static_cast<size_t>(r)];
    }
    if (det_out) *det_out = det;
    return sum;
}

std::vector<qc> aberth_roots(const std::vector<qc>& coeffs) {
    const int d = static_cast<int>(coeffs.size()) - 1;
    std::vector<qc> z(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double ang = 2.0 * M_PI * (i + 0.353) / d;
        z[static_cast<size_t>(i)] =
            make_qc(1.3 * std::cos(ang), 1.3 * std::sin(ang));
    }
    // A root is accepted once its residual reaches the backward-error floor
    // eps * sum |a_k||z|^k; clustered roots stall the correction size well
    // above any fixed step tolerance, so the step size alone cannot decide.
    const __float128 eps_q = 2e-34Q * (2 * d + 2);
    std::vector<bool> done(static_cast<size_t>(d), false);
    for (int iter = 0; iter < 300; ++iter) {
        bool all_done = true;
        for (int i = 0; i < d; ++i) {
            if (done[static_cast<size_t>(i)]) continue;
            const qc zi = z[static_cast<size_t>(i)];
            const qc p = horner(coeffs, zi);
            __float128 scale = 0.0Q, zpow = 1.0Q;
            const __float128 az = sqrtq(abs_sq(zi));
            for (const qc& c : coeffs) {
                scale += sqrtq(abs_sq(c)) * zpow;
                zpow *= az;
            }
            if (abs_sq(p) <= eps_q * eps_q * scale * scale) {
                done[static_cast<size_t>(i)] = true;
                continue;
            }
            const qc dp = horner_deriv(coeffs, zi);
            if (abs_sq(dp) == 0.0Q) { all_done = false; continue; }
            const qc w = p / dp;
            qc rep = make_qc(0.0, 0.0);
            for (int j = 0; j < d; ++j)
                if (j != i) rep = rep + make_qc(1.0, 0.0) / (zi - z[static_cast<size_t>(j)]);
            const qc corr = w / (make_qc(1.0, 0.0) - w * rep);
            z[static_cast<size_t>(i)] = zi - corr;
            if (abs_sq(corr) / (1.0Q + abs_sq(zi)) < 1e-64Q)
                done[static_cast<size_t>(i)] = true;
            else
                all_done = false;
        }
        if (all_done) return z;
    }
    throw numerical_error("pole iteration failed to converge in extended precision");
}

} // namespace

PoleData rational_pole_data(const SpectralData& sd) {
    validate(sd);
    for (const BlaschkeProduct& b : sd.psi)
        if (b.degree() != 0)
            throw validation_error("pole extraction requires degree-zero Blaschke data");

    PoleData pd;
    if (sd.n() == 0) return pd;
    const int q = sd.q();
    if (sd.n() == 1) {
        // u = s1 * Psi1, constant
        pd.beta0 = sd.s[0] * std::polar(1.0, -sd.psi[0].angle);
        return pd;
    }

    std::vector<__float128> rho(static_cast<size_t>(q)), sigma(static_cast<size_t>(q));
    std::vector<qc> ph_odd(static_cast<size_t>(q)), ph_pair(static_cast<size_t>(q * q));
    for (int j = 0; j < q; ++j) {
        rho[static_cast<size_t>(j)] = sd.s[static_cast<size_t>(2 * j)];
        sigma[static_cast<size_t>(j)] =
            2 * j + 1 < sd.n() ? sd.s[static_cast<size_t>(2 * j + 1)] : 0.0;
        const __float128 aj = sd.psi[static_cast<size_t>(2 * j)].angle;
        qc pj;
        __real__ pj = cosq(-aj);
        __imag__ pj = sinq(-aj);
        ph_odd[static_cast<size_t>(j)] = pj;
    }
    for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
            const __float128 aj = sd.psi[static_cast<size_t>(2 * j)].angle;
            const __float128 ak =
                2 * k + 1 < sd.n() ? (__float128)sd.psi[static_cast<size_t>(2 * k + 1)].angle : 0.0Q;
            qc p;
            __real__ p = cosq(-(aj + ak));
            __imag__ p = sinq(-(aj + ak));
            ph_pair[static_cast<size_t>(j * q + k)] = p;
        }

    // values of det C#(z) and of N(z) = u(z) det C#(z) at roots of unity;
    // both are polynomials of degree <= q - 1 < n_nodes
    const int n_nodes = q + 2;
    std::vector<qc> det_vals(static_cast<size_t>(n_nodes)), num_vals(static_cast<size_t>(n_nodes));
    for (int m = 0; m < n_nodes; ++m) {
        const qc z = circle_point(m, n_nodes);
        std::vector<qc> a(static_cast<size_t>(q * q));
        std::vector<qc> b(static_cast<size_t>(q));
        for (int j = 0; j < q; ++j) {
            for (int k = 0; k < q; ++k) {
                const __float128 rj = rho[static_cast<size_t>(j)], sk = sigma[static_cast<size_t>(k)];
                qc e = make_qc(0.0, 0.0);
                __real__ e = rj;
                e = e - sk * (z * ph_pair[static_cast<size_t>(j * q + k)]);
                a[static_cast<size_t>(j * q + k)] = e / (rj * rj - sk * sk);
            }
            b[static_cast<size_t>(j)] = ph_odd[static_cast<size_t>(j)];
        }
        qc det;
        const qc u_val = lu_solve(std::move(a), std::move(b), q, &det);
        det_vals[static_cast<size_t>(m)] = det;
        num_vals[static_cast<size_t>(m)] = u_val * det;
    }

    auto interpolate = [&](const std::vector<qc>& vals) {
        std::vector<qc> coeffs(static_cast<size_t>(n_nodes), make_qc(0.0, 0.0));
        for (int j = 0; j < n_nodes; ++j) {
            qc acc = make_qc(0.0, 0.0);
            for (int m = 0; m < n_nodes; ++m)
                acc = acc + vals[static_cast<size_t>(m)] * circle_point(-static_cast<long>(j) * m, n_nodes);
            coeffs[static_cast<size_t>(j)] = acc / make_qc(n_nodes, 0.0);
        }
        __float128 peak = 0.0Q;
        for (const qc& c : coeffs) peak = std::max(peak, abs_sq(c));
        while (coeffs.size() > 1 && abs_sq(coeffs.back()) < 1e-60Q * peak) coeffs.pop_back();
        return coeffs;
    };
    const std::vector<qc> det_poly = interpolate(det_vals);
    const std::vector<qc> num_poly = interpolate(num_vals);
    if (num_poly.size() > det_poly.size())
        throw numerical_error("synthesized symbol is not proper rational (degree excess)");

    if (num_poly.size() == det_poly.size())
        pd.beta0 = to_cd(num_poly.back() / det_poly.back());

    if (det_poly.size() > 1) {
        const std::vector<qc> roots = aberth_roots(det_poly);
        for (const qc& r : roots) {
            if (abs_sq(r) <= 1.0Q)
                throw numerical_error("symbol pole inside the closed unit disc");
            const qc res = horner(num_poly, r) / horner_deriv(det_poly, r);
            pd.poles.push_back(to_cd(r));
            pd.residues.push_back(to_cd(res));
            pd.log_poles.push_back(to_cd(log1p_qc(r - make_qc(1.0, 0.0))));
        }
    }
    return pd;
}

namespace detail {

namespace {

// zeta on the nonpositive axis via the functional equation; argument -2s-n
double zeta_neg(double w) {
    if (w == 0.0) return -0.5;
    const double pi_d = M_PI;
    return std::pow(2.0, w) * std::pow(pi_d, w - 1.0) * std::sin(pi_d * w / 2.0) *
           std::tgamma(1.0 - w) * std::riemann_zeta(1.0 - w);
}

} // namespace

cd power_weight_sum(double two_s, cd x, cd log_x) {
    // sum_{k>=0} (1+k)^{2s} x^k = Li_{-2s}(x) / x with
    // Li_v(e^mu) = Gamma(1-v)(-mu)^{v-1} + sum_n zeta(v-n) mu^n / n!
    const double v = -two_s;
    const cd mu = log_x;
    if (!(std::abs(mu) < 2.0 * pi) || !(mu.real() < 0.0))
        throw numerical_error("mode-sum expansion parameter out of range");
    cd li = std::tgamma(1.0 - v) * std::pow(-mu, v - 1.0);
    cd mu_pow{1.0, 0.0};
    double factorial = 1.0;
    double prev = std::abs(li);
    for (int n = 0; n < 160; ++n) {
        if (n > 0) {
            mu_pow *= mu;
            factorial *= n;
        }
        const cd term = zeta_neg(v - n) * mu_pow / factorial;
        li += term;
        // At integer v every other zeta argument is a zero, so one small
        // term proves nothing; stop only on two consecutive small ones.
        const double mag = std::abs(term);
        if (n > 4 && mag < 1e-20 * std::abs(li) && prev < 1e-20 * std::abs(li)) break;
        prev = mag;
    }
    return li / x;
}

} // namespace detail

double sobolev_norm_exact(const SpectralData& sd, double s) {
    if (!(s >= 0.0)) throw validation_error("exact norm needs s >= 0");
    const PoleData pd = rational_pole_data(sd);
    const size_t np = pd.poles.size();
    std::vector<cd> g(np);
    for (size_t i = 0; i < np; ++i) g[i] = -pd.residues[i] / pd.poles[i];

    cd mode_sum{0.0, 0.0};
    for (size_t i = 0; i < np; ++i)
        for (size_t ip = 0; ip < np; ++ip) {
            cd mu = -pd.log_poles[i] - std::conj(pd.log_poles[ip]);
            // e^mu is what matters; fold the angle to the principal branch
            if (mu.imag() > pi) mu -= cd{0.0, 2.0 * pi};
            if (mu.imag() <= -pi) mu += cd{0.0, 2.0 * pi};
            const cd x = std::exp(mu);
            mode_sum += g[i] * std::conj(g[ip]) * detail::power_weight_sum(2.0 * s, x, mu);
        }

    cd g_total{0.0, 0.0};
    for (const cd& gi : g) g_total += gi;
    const double norm_sq =
        mode_sum.real() - std::norm(g_total) + std::norm(pd.beta0 + g_total);
    if (!(norm_sq >= -1e-9) || !std::isfinite(norm_sq))
        throw numerical_error("exact norm evaluation lost positivity");
    return std::sqrt(std::max(norm_sq, 0.0));
}

} // namespace szego
