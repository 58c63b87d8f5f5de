#pragma once

#include "ambdg/common.hpp"
#include "ambdg/rng.hpp"

namespace ambdg {

/// Synthetic regression instance: w* ~ N(0, I_d), labels y = zeta'w* + eps.
struct GroundTruth {
    Vec wstar;
    double noise_var = 0.0;  // variance of the label noise eps
};

GroundTruth gen_ground_truth(Eigen::Index d, double noise_var, Rng& rng);

struct DataPoint {
    Vec zeta;
    double y = 0.0;
};

/// Canonical draw order: zeta coordinates 0..d-1, then the noise sample.
/// Everything that regenerates data (simulators, regret evaluation) goes
/// through this so streams replay identically.
void sample_point_into(const GroundTruth& gt, Rng& rng, Vec& zeta, double& y);
DataPoint sample_point(const GroundTruth& gt, Rng& rng);

/// (zeta'w - y)^2
double loss(const Vec& w, const DataPoint& p);

/// (zeta'w - y) * zeta, i.e. the gradient of the half-squared residual.
Vec grad(const Vec& w, const DataPoint& p);

/// ||w - w*||^2 / ||w*||^2, the N->inf limit of the sampled error rate.
double error_rate(const Vec& w, const GroundTruth& gt);

/// Draws `count` points from `rng` and adds their gradients at w into g_sum.
/// Returns the number of samples added (== count).
long accumulate_grad_sum(const Vec& w, const GroundTruth& gt, long count, Rng& rng, Vec& g_sum);

}  // namespace ambdg
