#pragma once

#include "ambdg/common.hpp"

namespace ambdg {

/// Dual-averaging state: dual variable z, epoch counter, and the
/// step-size schedule constants (staleness tau, L, expected batch b_bar).
struct DualAvgState {
    Vec z;
    long epoch = 1;
    long tau = 0;
    double lipschitz = 0.0;
    double b_bar = 1.0;
};

DualAvgState make_dual_state(Eigen::Index d, long tau, double lipschitz, double b_bar);

/// alpha(t) = 1 / (L + sqrt((t + tau) / b_bar)); strictly decreasing in t.
double step_size(const DualAvgState& s, long t);

/// z' = z + g_avg, t' = t + 1. g_avg is the per-sample average of the
/// gradient sums received in the epoch.
DualAvgState dual_updated(DualAvgState s, const Vec& g_avg);
void dual_update_inplace(DualAvgState& s, const Vec& g_avg);

/// Closed-form argmin of <z, w> + psi(w)/alpha over R^d with psi = ||w||^2/2.
Vec primal_update(const Vec& z, double alpha);

/// Bregman divergence of psi = ||.||^2/2, i.e. ||wstar - w||^2 / 2.
double bregman(const Vec& wstar, const Vec& w);

/// psi and its gradient, kept explicit so tests can check the certificates.
inline double psi(const Vec& w) { return 0.5 * w.squaredNorm(); }
inline Vec psi_grad(const Vec& w) { return w; }

/// Constants of the smoothness/variance assumptions used by bound evaluators.
struct AssumptionConstants {
    double J = 0.0;       // Lipschitz constant of F
    double L = 0.0;       // Lipschitz constant of grad f
    double sigma2 = 0.0;  // gradient variance bound
    double C2 = 0.0;      // Bregman bound, psi(w*) <= C^2/2
};

}  // namespace ambdg
