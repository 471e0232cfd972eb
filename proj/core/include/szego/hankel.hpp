#pragma once

#include <Eigen/Core>
#include <vector>

#include "szego/hardy.hpp"

namespace szego {

enum class OperatorSide { H, K };

/// Truncated matrices of the Hankel operator pair of a symbol u:
/// gamma_{np} = u^(n+p) and gamma_shift_{np} = u^(n+p+1), both symmetric.
/// The antilinear operators act as H_u h = gamma * conj(h),
/// K_u h = gamma_shift * conj(h); their squares gamma*gamma^H and
/// gamma_shift*gamma_shift^H are the Hermitian forms analyzed below.
struct HankelPair {
    Eigen::MatrixXcd gamma;
    Eigen::MatrixXcd gamma_shift;
    HardySymbol source;

    int dim() const { return static_cast<int>(gamma.rows()); }
};

/// n_trunc = 0 picks the symbol's own mode count.
HankelPair build_pair(const HardySymbol& u, int n_trunc = 0);

/// (T_b)_{np} = b^(n-p) for a two-sided list b(-K..K) packed with index 0 at
/// b_two_sided[K].
Eigen::MatrixXcd toeplitz_matrix(const Eigen::VectorXcd& b_two_sided, int n);

/// H_u h and K_u h as symbols of the pair's truncation size.
HardySymbol apply_hankel(const HankelPair& pair, const HardySymbol& h);
HardySymbol apply_shifted(const HankelPair& pair, const HardySymbol& h);

/// One eigenvalue cluster of gamma*gamma^H (side H) or of the shifted form
/// (side K): the singular value s, its multiplicity, an orthonormal basis of
/// the eigenspace, and the projection of the source symbol onto it.
struct EigenCluster {
    double s = 0.0;
    double s_sq = 0.0;
    int mult = 0;
    Eigen::MatrixXcd basis;
    HardySymbol u_proj;
    double norm_sq = 0.0;
    OperatorSide side = OperatorSide::H;
    bool kernel = false;
    /// Set when a neighboring spectral gap falls within a factor 10 of the
    /// clustering tolerance, i.e. the grouping decision is fragile.
    bool ambiguous = false;
};

/// Eigen-decompose the requested Hermitian form and group eigenvalues whose
/// relative gap (on the singular-value scale, against s_max) is below
/// tol_rel. Clusters are sorted by decreasing s; the near-zero cluster is
/// labeled kernel. Projections of the source symbol are filled in.
std::vector<EigenCluster> spectral_clusters(const HankelPair& pair, OperatorSide side,
                                            double tol_rel = 1e-6);

/// Fill u_proj / norm_sq of a cluster from the symbol it came from.
EigenCluster project_symbol(const HardySymbol& u, EigenCluster cluster);

struct SkeletonEntry {
    double s = 0.0;
    OperatorSide side = OperatorSide::H;
    int mult = 0;       // multiplicity on the dominant side
    int other_mult = 0; // multiplicity of the same s on the opposite side
    int cluster_index = 0;
};

/// The interlaced list of dominant singular values: odd positions H-side,
/// even positions K-side, strictly decreasing.
struct SpectralSkeleton {
    std::vector<SkeletonEntry> entries;
    /// True when every dominant cluster's opposite-side multiplicity equals
    /// its own minus one (reported, not enforced).
    bool mult_pairing_ok = true;
};

/// Classify positive clusters as H- or K-dominant by ||u_proj|| > tol_dom*||u||
/// and merge into the strictly interlaced skeleton. Throws numerical_error
/// when a value is dominant on both sides or the interlacing fails.
SpectralSkeleton dominance_split(const HardySymbol& u,
                                 const std::vector<EigenCluster>& clusters_h,
                                 const std::vector<EigenCluster>& clusters_k,
                                 double tol_dom = 1e-8);

} // namespace szego
