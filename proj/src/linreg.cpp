#include "ambdg/linreg.hpp"

#include <cmath>

namespace ambdg {

GroundTruth gen_ground_truth(Eigen::Index d, double noise_var, Rng& rng) {
    if (d < 1) throw ConfigError("gen_ground_truth: dimension must be >= 1");
    if (noise_var < 0.0) throw ConfigError("gen_ground_truth: noise_var must be >= 0");
    GroundTruth gt;
    gt.wstar.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) gt.wstar[i] = rng.normal();
    gt.noise_var = noise_var;
    return gt;
}

void sample_point_into(const GroundTruth& gt, Rng& rng, Vec& zeta, double& y) {
    const Eigen::Index d = gt.wstar.size();
    zeta.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) zeta[i] = rng.normal();
    double eps = gt.noise_var > 0.0 ? std::sqrt(gt.noise_var) * rng.normal() : 0.0;
    y = zeta.dot(gt.wstar) + eps;
}

DataPoint sample_point(const GroundTruth& gt, Rng& rng) {
    DataPoint p;
    sample_point_into(gt, rng, p.zeta, p.y);
    return p;
}

double loss(const Vec& w, const DataPoint& p) {
    require_same_dim(w, p.zeta, "loss");
    const double r = p.zeta.dot(w) - p.y;
    return r * r;
}

Vec grad(const Vec& w, const DataPoint& p) {
    require_same_dim(w, p.zeta, "grad");
    const double r = p.zeta.dot(w) - p.y;
    return r * p.zeta;
}

double error_rate(const Vec& w, const GroundTruth& gt) {
    require_same_dim(w, gt.wstar, "error_rate");
    const double denom = gt.wstar.squaredNorm();
    if (denom == 0.0) throw std::domain_error("error_rate: ||w*|| is zero");
    return (w - gt.wstar).squaredNorm() / denom;
}

long accumulate_grad_sum(const Vec& w, const GroundTruth& gt, long count, Rng& rng, Vec& g_sum) {
    require_same_dim(w, gt.wstar, "accumulate_grad_sum");
    require_same_dim(g_sum, w, "accumulate_grad_sum");
    Vec zeta(w.size());
    double y = 0.0;
    for (long s = 0; s < count; ++s) {
        sample_point_into(gt, rng, zeta, y);
        const double r = zeta.dot(w) - y;
        g_sum.noalias() += r * zeta;
    }
    return count;
}

}  // namespace ambdg
