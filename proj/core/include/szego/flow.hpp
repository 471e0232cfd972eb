#pragma once

#include <vector>

#include "szego/nlft.hpp"

namespace szego {

struct InvariantRow {
    double mass = 0.0;
    double energy = 0.0;
    double h_half = 0.0;
    std::vector<double> s_values; // leading singular values, descending
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<HardySymbol> states;
    std::vector<InvariantRow> invariants;
};

/// Exact evolution: Psi_r picks up the phase e^{i(-1)^r s_r^2 t}, i.e. the
/// stored angle moves by psi_r -> psi_r - (-1)^r s_r^2 t (r is 1-based);
/// singular values and Blaschke zeros are untouched.
SpectralData evolve_exact(SpectralData sd, double t);

/// -i Pi(|u|^2 u) by dealiased grid multiplication. grid_m = 0 picks the
/// smallest power of two >= 4*n_modes; an explicit grid must satisfy the
/// same bound.
HardySymbol szego_rhs(const HardySymbol& u, int grid_m = 0);

struct IntegrateOptions {
    int grid_m = 0;      // 0: smallest power of two >= 4*n_modes
    int stride = 0;      // sample every stride steps; 0: about ten samples
    int tracked_s = 8;   // singular values logged per sample
    double drift_abort = 1e-4;
};

/// Fixed-step RK4 on the cubic flow, invariants sampled along the way.
/// Rejects dt*(max|u0|)^2 > 0.1; aborts (numerical_error) when mass or
/// energy drifts beyond drift_abort relative.
TrajectoryRecord integrate_direct(const HardySymbol& u0, double T, double dt,
                                  const IntegrateOptions& opts = {});

struct HierarchyEval {
    double y = 0.0;
    double j_resolvent = 0.0; // ((I + y H^2)^{-1} 1 | 1)
    double j_product = 0.0;   // prod (1 + y sigma^2)/(1 + y rho^2)
    bool has_product = false;
    HardySymbol w;            // (I + y H^2)^{-1} 1
    std::vector<double> omegas; // filled when spectral data is supplied
};

/// Conserved hierarchy value by resolvent solve; with spectral data also the
/// product form and the flow frequencies
/// omega_r = (-1)^{r-1} 2 y J^y / (1 + y s_r^2).
HierarchyEval j_y(const HardySymbol& u, double y, const SpectralData* sd = nullptr);

/// Hierarchy flow: Psi_r multiplied by e^{i omega_r t}.
SpectralData hierarchy_evolve_exact(SpectralData sd, double y, double t);

/// RK4 on du/dt = 2iy w H_u(w) with w recomputed per stage.
TrajectoryRecord integrate_hierarchy_direct(const HardySymbol& u0, double y, double T,
                                            double dt, const IntegrateOptions& opts = {});

/// Max relative drifts against the first sample. Singular values below
/// 1e-8 * s_1 at t=0 are excluded from tracking.
struct DriftSummary {
    double mass = 0.0;
    double energy = 0.0;
    double h_half = 0.0;
    double s_drift = 0.0;
};

DriftSummary invariant_report(const TrajectoryRecord& traj);

} // namespace szego
