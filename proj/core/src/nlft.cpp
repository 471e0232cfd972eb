#include "szego/nlft.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "parallel.hpp"

namespace szego {

void validate(const SpectralData& sd) {
    if (sd.s.size() != sd.psi.size())
        throw validation_error("spectral data: s and psi lengths differ");
    if (sd.s.empty()) return;
    for (double v : sd.s)
        if (!(v > 0.0) || !std::isfinite(v))
            throw validation_error("spectral data: singular values must be positive finite");
    for (size_t r = 0; r + 1 < sd.s.size(); ++r)
        if (!(sd.s[r] - sd.s[r + 1] >= 1e-10 * sd.s[0]))
            throw validation_error("spectral data: singular values must decrease with "
                                   "relative gaps >= 1e-10");
}

namespace {

int next_pow2(int n) {
    int m = 1;
    while (m < n) m *= 2;
    return m;
}

// Evaluation tables for the explicit formula. Index j runs over odd
// positions (H side), k over even positions (K side); when n is odd the
// trailing K slot is the implicit s=0 with unit Blaschke product.
struct Prepared {
    int q = 0;
    std::vector<double> rho, sigma;
    std::vector<Eigen::VectorXcd> p_odd, d_odd, p_even, d_even;
    std::vector<cd> ph_odd, ph_even; // e^{-i psi}
};

Prepared prepare(const SpectralData& sd) {
    Prepared pre;
    pre.q = sd.q();
    pre.rho.resize(static_cast<size_t>(pre.q));
    pre.sigma.resize(static_cast<size_t>(pre.q));
    pre.p_odd.resize(static_cast<size_t>(pre.q));
    pre.d_odd.resize(static_cast<size_t>(pre.q));
    pre.p_even.resize(static_cast<size_t>(pre.q));
    pre.d_even.resize(static_cast<size_t>(pre.q));
    pre.ph_odd.resize(static_cast<size_t>(pre.q));
    pre.ph_even.resize(static_cast<size_t>(pre.q));
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
    for (int j = 0; j < pre.q; ++j) {
        pre.rho[static_cast<size_t>(j)] = sd.s[static_cast<size_t>(2 * j)];
        MonicPair mp = monic_pair(sd.psi[static_cast<size_t>(2 * j)]);
        pre.p_odd[static_cast<size_t>(j)] = std::move(mp.p);
        pre.d_odd[static_cast<size_t>(j)] = std::move(mp.d);
        pre.ph_odd[static_cast<size_t>(j)] =
            std::polar(1.0, -sd.psi[static_cast<size_t>(2 * j)].angle);
        if (2 * j + 1 < sd.n()) {
            pre.sigma[static_cast<size_t>(j)] = sd.s[static_cast<size_t>(2 * j + 1)];
            MonicPair me = monic_pair(sd.psi[static_cast<size_t>(2 * j + 1)]);
            pre.p_even[static_cast<size_t>(j)] = std::move(me.p);
            pre.d_even[static_cast<size_t>(j)] = std::move(me.d);
            pre.ph_even[static_cast<size_t>(j)] =
                std::polar(1.0, -sd.psi[static_cast<size_t>(2 * j + 1)].angle);
        } else {
            pre.sigma[static_cast<size_t>(j)] = 0.0;
            pre.p_even[static_cast<size_t>(j)] = one;
            pre.d_even[static_cast<size_t>(j)] = one;
            pre.ph_even[static_cast<size_t>(j)] = cd{1.0, 0.0};
        }
    }
    return pre;
}

// C#(z) plus the solve vectors: rhs_j = e^{-i psi_{2j-1}} P_{2j-1}(z),
// dcol_k = D_{2k}(z).
void fill_csharp(const Prepared& pre, cd z, Eigen::MatrixXcd& c, Eigen::VectorXcd& rhs,
                 Eigen::VectorXcd& dcol) {
    const int q = pre.q;
    Eigen::VectorXcd pj(q), dj(q), pk(q), dk(q);
    for (int j = 0; j < q; ++j) {
        pj[j] = eval_poly(pre.p_odd[static_cast<size_t>(j)], z);
        dj[j] = eval_poly(pre.d_odd[static_cast<size_t>(j)], z);
        pk[j] = eval_poly(pre.p_even[static_cast<size_t>(j)], z);
        dk[j] = eval_poly(pre.d_even[static_cast<size_t>(j)], z);
    }
    for (int j = 0; j < q; ++j) {
        const double rj = pre.rho[static_cast<size_t>(j)];
        for (int k = 0; k < q; ++k) {
            const double sk = pre.sigma[static_cast<size_t>(k)];
            c(j, k) = (rj * dk[k] * dj[j] -
                       sk * z * pre.ph_even[static_cast<size_t>(k)] *
                           pre.ph_odd[static_cast<size_t>(j)] * pk[k] * pj[j]) /
                      (rj * rj - sk * sk);
        }
        rhs[j] = pre.ph_odd[static_cast<size_t>(j)] * pj[j];
    }
    for (int k = 0; k < q; ++k) dcol[k] = dk[k];
}

void check_solution(const Eigen::MatrixXcd& c, const Eigen::VectorXcd& y,
                    const Eigen::VectorXcd& rhs) {
    const double scale = c.cwiseAbs().maxCoeff() * y.norm() + rhs.norm();
    const double resid = (c * y - rhs).norm();
    if (!std::isfinite(resid) || resid > 1e-7 * std::max(scale, 1e-300))
        throw numerical_error("matrix C# is numerically singular on the sampling grid");
}

} // namespace

Eigen::MatrixXcd build_Csharp(const SpectralData& sd, cd z) {
    validate(sd);
    if (sd.n() == 0) return Eigen::MatrixXcd::Zero(0, 0);
    const Prepared pre = prepare(sd);
    Eigen::MatrixXcd c(pre.q, pre.q);
    Eigen::VectorXcd rhs(pre.q), dcol(pre.q);
    fill_csharp(pre, z, c, rhs, dcol);
    return c;
}

Eigen::MatrixXcd build_C(const SpectralData& sd, cd z) {
    validate(sd);
    if (sd.n() == 0) return Eigen::MatrixXcd::Zero(0, 0);
    const int q = sd.q();
    Eigen::MatrixXcd c(q, q);
    for (int j = 0; j < q; ++j) {
        const double rj = sd.s[static_cast<size_t>(2 * j)];
        const cd psi_j = eval(sd.psi[static_cast<size_t>(2 * j)], z);
        for (int k = 0; k < q; ++k) {
            const bool virt = 2 * k + 1 >= sd.n();
            const double sk = virt ? 0.0 : sd.s[static_cast<size_t>(2 * k + 1)];
            const cd psi_k = virt ? cd{1.0, 0.0} : eval(sd.psi[static_cast<size_t>(2 * k + 1)], z);
            c(j, k) = (rj - sk * z * psi_k * psi_j) / (rj * rj - sk * sk);
        }
    }
    return c;
}

HardySymbol inverse(const SpectralData& sd, int grid_m, int n_out, InverseReport* report) {
    validate(sd);
    if (n_out < 1) throw validation_error("n_out must be >= 1");
    if (!is_power_of_two(grid_m) || grid_m < 4 * n_out)
        throw validation_error("grid must be a power of two with M >= 4*n_out");
    if (sd.n() == 0) {
        if (report) *report = InverseReport{};
        return make_symbol(Eigen::VectorXcd::Zero(n_out));
    }

    const Prepared pre = prepare(sd);
    const int q = pre.q;
    Eigen::VectorXcd values(grid_m);
    std::vector<double> dets(static_cast<size_t>(grid_m), 0.0);
    std::vector<double> conds(static_cast<size_t>(grid_m), 0.0);
    const bool want_cond = report != nullptr;

    detail::parallel_for(grid_m, [&](long m) {
        const cd z = std::polar(1.0, 2.0 * pi * static_cast<double>(m) / grid_m);
        Eigen::MatrixXcd c(q, q);
        Eigen::VectorXcd rhs(q), dcol(q);
        fill_csharp(pre, z, c, rhs, dcol);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(c);
        Eigen::VectorXcd y = lu.solve(rhs);
        check_solution(c, y, rhs);
        values[m] = dcol.transpose() * y;
        dets[static_cast<size_t>(m)] = std::abs(lu.determinant());
        if (want_cond) {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
            const double smin = svd.singularValues()[q - 1];
            conds[static_cast<size_t>(m)] = smin > 0 ? svd.singularValues()[0] / smin
                                                     : std::numeric_limits<double>::infinity();
        }
    });

    HardySymbol full = grid_to_symbol(GridValues{std::move(values)}, grid_m);
    double total = 0.0, tail = 0.0;
    for (int k = 0; k < grid_m; ++k) {
        const double e = std::norm(full.coeffs[k]);
        total += e;
        if (k >= n_out) tail += e;
    }
    if (report) {
        report->tail_energy = total > 0 ? tail / total : 0.0;
        report->min_abs_det = *std::min_element(dets.begin(), dets.end());
        report->max_condition = *std::max_element(conds.begin(), conds.end());
    }
    return make_symbol(Eigen::VectorXcd(full.coeffs.head(n_out)));
}

cd inverse_point(const SpectralData& sd, cd z) {
    validate(sd);
    if (sd.n() == 0) return cd{0.0, 0.0};
    const Prepared pre = prepare(sd);
    Eigen::MatrixXcd c(pre.q, pre.q);
    Eigen::VectorXcd rhs(pre.q), dcol(pre.q);
    fill_csharp(pre, z, c, rhs, dcol);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(c);
    Eigen::VectorXcd y = lu.solve(rhs);
    check_solution(c, y, rhs);
    return dcol.transpose() * y;
}

std::vector<cd> components_sigma(const SpectralData& sd, cd z) {
    validate(sd);
    if (sd.n() == 0) return {};
    const Prepared pre = prepare(sd);
    Eigen::MatrixXcd c(pre.q, pre.q);
    Eigen::VectorXcd rhs(pre.q), dcol(pre.q);
    fill_csharp(pre, z, c, rhs, dcol);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(c);
    Eigen::VectorXcd y = lu.solve(rhs);
    check_solution(c, y, rhs);
    std::vector<cd> out(static_cast<size_t>(pre.q));
    for (int k = 0; k < pre.q; ++k) out[static_cast<size_t>(k)] = dcol[k] * y[k];
    return out;
}

std::vector<cd> components_rho(const SpectralData& sd, cd z) {
    validate(sd);
    if (sd.n() == 0) return {};
    const Prepared pre = prepare(sd);
    Eigen::MatrixXcd c(pre.q, pre.q);
    Eigen::VectorXcd rhs(pre.q), dcol(pre.q);
    fill_csharp(pre, z, c, rhs, dcol);
    Eigen::MatrixXcd ct = c.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ct);
    Eigen::VectorXcd h = lu.solve(dcol);
    check_solution(ct, h, dcol);
    std::vector<cd> out(static_cast<size_t>(pre.q));
    for (int j = 0; j < pre.q; ++j) out[static_cast<size_t>(j)] = rhs[j] * h[j];
    return out;
}

NormingConstants norming_constants(const SpectralData& sd) {
    validate(sd);
    NormingConstants nc;
    if (sd.n() == 0) return nc;
    const int q = sd.q();
    const int n_sigma = sd.n() / 2;
    std::vector<double> rho2(static_cast<size_t>(q)), sig2(static_cast<size_t>(q));
    for (int j = 0; j < q; ++j) {
        const double r = sd.s[static_cast<size_t>(2 * j)];
        rho2[static_cast<size_t>(j)] = r * r;
        const double s = 2 * j + 1 < sd.n() ? sd.s[static_cast<size_t>(2 * j + 1)] : 0.0;
        sig2[static_cast<size_t>(j)] = s * s;
    }

    nc.tau_sq.resize(static_cast<size_t>(q));
    for (int j = 0; j < q; ++j) {
        double v = 1.0;
        for (int k = 0; k < q; ++k) v *= rho2[static_cast<size_t>(j)] - sig2[static_cast<size_t>(k)];
        for (int jp = 0; jp < q; ++jp)
            if (jp != j) v /= rho2[static_cast<size_t>(j)] - rho2[static_cast<size_t>(jp)];
        nc.tau_sq[static_cast<size_t>(j)] = v;
    }

    nc.kappa_sq.resize(static_cast<size_t>(n_sigma));
    for (int k = 0; k < n_sigma; ++k) {
        double v = rho2[static_cast<size_t>(k)] - sig2[static_cast<size_t>(k)];
        for (int jp = 0; jp < q; ++jp)
            if (jp != k) v *= sig2[static_cast<size_t>(k)] - rho2[static_cast<size_t>(jp)];
        for (int kp = 0; kp < q; ++kp)
            if (kp != k) v /= sig2[static_cast<size_t>(k)] - sig2[static_cast<size_t>(kp)];
        nc.kappa_sq[static_cast<size_t>(k)] = v;
    }

    if (sd.odd()) {
        double v = 1.0;
        for (int j = 0; j < q; ++j) v *= rho2[static_cast<size_t>(j)];
        for (int k = 0; k < n_sigma; ++k) v /= sig2[static_cast<size_t>(k)];
        nc.kappa0_sq = v;
        nc.has_kappa0 = true;
    }
    return nc;
}

double BatemanReport::max_residual() const {
    return std::max(std::max(generating, simple_sum), std::max(double_sum, nu_sum));
}

BatemanReport bateman_check(const SpectralData& sd, const NormingConstants& nc,
                            std::uint64_t seed) {
    validate(sd);
    BatemanReport rep;
    if (sd.n() == 0) return rep;
    const int q = sd.q();
    const int n_sigma = sd.n() / 2;
    std::vector<double> rho2(static_cast<size_t>(q)), sig2(static_cast<size_t>(q));
    for (int j = 0; j < q; ++j) {
        rho2[static_cast<size_t>(j)] = sd.s[static_cast<size_t>(2 * j)] * sd.s[static_cast<size_t>(2 * j)];
        const double s = 2 * j + 1 < sd.n() ? sd.s[static_cast<size_t>(2 * j + 1)] : 0.0;
        sig2[static_cast<size_t>(j)] = s * s;
    }

    std::mt19937_64 gen(seed);
    for (int trial = 0; trial < 16; ++trial) {
        double c = std::ldexp(static_cast<double>(gen() >> 11), -53);
        if (c == 0.0) c = 0.5;
        const double x = -c / rho2[0];
        double prod = 1.0;
        for (int j = 0; j < q; ++j)
            prod *= (1.0 - x * sig2[static_cast<size_t>(j)]) / (1.0 - x * rho2[static_cast<size_t>(j)]);
        double sum = 1.0;
        for (int j = 0; j < q; ++j)
            sum += x * nc.tau_sq[static_cast<size_t>(j)] / (1.0 - x * rho2[static_cast<size_t>(j)]);
        rep.generating = std::max(rep.generating, std::abs(prod - sum));
    }

    // sigma arguments: the K-dominant values, plus sigma=0 when n is odd
    std::vector<double> args2;
    std::vector<double> kap2;
    for (int k = 0; k < n_sigma; ++k) {
        args2.push_back(sig2[static_cast<size_t>(k)]);
        kap2.push_back(nc.kappa_sq[static_cast<size_t>(k)]);
    }
    if (sd.odd()) {
        args2.push_back(0.0);
        kap2.push_back(nc.kappa0_sq);
    }

    for (double a2 : args2) {
        double sum = 0.0;
        for (int j = 0; j < q; ++j)
            sum += nc.tau_sq[static_cast<size_t>(j)] / (rho2[static_cast<size_t>(j)] - a2);
        rep.simple_sum = std::max(rep.simple_sum, std::abs(sum - 1.0));
    }

    for (size_t ka = 0; ka < args2.size(); ++ka)
        for (size_t kb = 0; kb < args2.size(); ++kb) {
            double sum = 0.0;
            for (int j = 0; j < q; ++j)
                sum += nc.tau_sq[static_cast<size_t>(j)] /
                       ((rho2[static_cast<size_t>(j)] - args2[ka]) *
                        (rho2[static_cast<size_t>(j)] - args2[kb]));
            const double target = ka == kb ? 1.0 / kap2[ka] : 0.0;
            rep.double_sum = std::max(rep.double_sum, std::abs(sum - target));
        }

    double sum_nu = 0.0;
    for (int j = 0; j < q; ++j) sum_nu += nc.tau_sq[static_cast<size_t>(j)] / rho2[static_cast<size_t>(j)];
    double prod_nu = 1.0;
    for (int j = 0; j < q; ++j) prod_nu *= sig2[static_cast<size_t>(j)] / rho2[static_cast<size_t>(j)];
    rep.nu_sum = std::abs(1.0 - sum_nu - prod_nu);
    return rep;
}

KernelDiagnostic kernel_diagnostic(const SpectralData& sd, bool assume_truncated) {
    validate(sd);
    if (sd.n() == 0) throw validation_error("kernel diagnostic needs nonempty spectral data");
    KernelDiagnostic diag;
    const int n_sigma = sd.n() / 2;
    // complete (rho_j, sigma_j) pairs
    for (int j = 0; j < n_sigma; ++j) {
        const double r = sd.s[static_cast<size_t>(2 * j)], s = sd.s[static_cast<size_t>(2 * j + 1)];
        diag.prod_rho *= (s * s) / (r * r);
    }
    // complete (sigma_k, rho_{k+1}) pairs
    for (int k = 0; 2 * k + 2 < sd.n(); ++k) {
        const double s = sd.s[static_cast<size_t>(2 * k + 1)], r = sd.s[static_cast<size_t>(2 * k + 2)];
        diag.prod_sigma *= (s * s) / (r * r);
    }
    diag.kind = assume_truncated ? KernelKind::undetermined : KernelKind::nontrivial;
    return diag;
}

namespace {

std::vector<int> keep_indices(const Eigen::VectorXcd& den) {
    double max_abs = 0.0;
    for (long i = 0; i < den.size(); ++i) max_abs = std::max(max_abs, std::abs(den[i]));
    std::vector<int> keep;
    keep.reserve(static_cast<size_t>(den.size()));
    for (long i = 0; i < den.size(); ++i)
        if (std::abs(den[i]) >= 1e-8 * max_abs) keep.push_back(static_cast<int>(i));
    return keep;
}

BlaschkeProduct fit_cluster_ratio(const HardySymbol& num, const HardySymbol& den, int M,
                                  int degree, double tol) {
    const GridValues gn = eval_grid(num, M), gd = eval_grid(den, M);
    const std::vector<int> keep = keep_indices(gd.values);
    if (static_cast<int>(keep.size()) < 2 * (degree + 1))
        throw numerical_error("too few usable boundary samples for Blaschke fit");
    std::vector<cd> zeta, ratio;
    zeta.reserve(keep.size());
    ratio.reserve(keep.size());
    for (int i : keep) {
        zeta.push_back(std::polar(1.0, 2.0 * pi * i / M));
        ratio.push_back(gn.values[i] / gd.values[i]);
    }
    try {
        return fit_from_boundary(zeta, ratio, degree, tol);
    } catch (const validation_error& e) {
        throw numerical_error(std::string("Blaschke fit rejected its boundary data: ") + e.what());
    }
}

} // namespace

SpectralData forward(const HardySymbol& u, const ForwardOptions& opts) {
    if (mass(u) <= 0.0) throw validation_error("zero symbol has no spectral data");
    const int n = opts.n_trunc > 0 ? std::max(opts.n_trunc, u.n_modes()) : u.n_modes();

    double total = 0.0, tail = 0.0;
    for (int k = 0; k < u.n_modes(); ++k) {
        const double e = std::norm(u.coeff(k));
        total += e;
        if (k >= n - n / 4) tail += e;
    }
    if (tail > 1e-10 * total)
        throw validation_error("rank not resolved at this truncation "
                               "(last-quarter energy too large; raise the mode count)");

    const int M = opts.grid_m > 0 ? opts.grid_m : next_pow2(std::max(4 * n, 64));
    if (!is_power_of_two(M) || M < 2 * n)
        throw validation_error("analysis grid must be a power of two with M >= 2*modes");

    const HankelPair pair = build_pair(u, n);
    const std::vector<EigenCluster> ch = spectral_clusters(pair, OperatorSide::H, opts.tol_cluster);
    const std::vector<EigenCluster> ck = spectral_clusters(pair, OperatorSide::K, opts.tol_cluster);
    const SpectralSkeleton sk = dominance_split(u, ch, ck, opts.tol_dom);

    SpectralData sd;
    for (const SkeletonEntry& e : sk.entries) {
        const EigenCluster& cl = e.side == OperatorSide::H
                                     ? ch[static_cast<size_t>(e.cluster_index)]
                                     : ck[static_cast<size_t>(e.cluster_index)];
        const int degree = e.mult - 1;
        Eigen::VectorXcd scaled = cl.u_proj.coeffs * e.s;
        BlaschkeProduct psi =
            e.side == OperatorSide::H
                ? fit_cluster_ratio(make_symbol(std::move(scaled)), apply_hankel(pair, cl.u_proj),
                                    M, degree, opts.tol_fit)
                : fit_cluster_ratio(apply_shifted(pair, cl.u_proj), make_symbol(std::move(scaled)),
                                    M, degree, opts.tol_fit);
        sd.s.push_back(e.s);
        sd.psi.push_back(std::move(psi));
    }
    validate(sd);
    return sd;
}

} // namespace szego
