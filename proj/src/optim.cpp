#include "ambdg/optim.hpp"

#include <cmath>

namespace ambdg {

DualAvgState make_dual_state(Eigen::Index d, long tau, double lipschitz, double b_bar) {
    if (d < 1) throw ConfigError("make_dual_state: dimension must be >= 1");
    if (tau < 0) throw ConfigError("make_dual_state: tau must be >= 0");
    if (lipschitz < 0.0) throw ConfigError("make_dual_state: lipschitz must be >= 0");
    if (b_bar <= 0.0) throw ConfigError("make_dual_state: b_bar must be > 0");
    DualAvgState s;
    s.z = Vec::Zero(d);  // z(1) = 0
    s.epoch = 1;
    s.tau = tau;
    s.lipschitz = lipschitz;
    s.b_bar = b_bar;
    return s;
}

double step_size(const DualAvgState& s, long t) {
    return 1.0 / (s.lipschitz + std::sqrt(static_cast<double>(t + s.tau) / s.b_bar));
}

void dual_update_inplace(DualAvgState& s, const Vec& g_avg) {
    require_same_dim(s.z, g_avg, "dual_update");
    s.z += g_avg;
    s.epoch += 1;
}

DualAvgState dual_updated(DualAvgState s, const Vec& g_avg) {
    dual_update_inplace(s, g_avg);
    return s;
}

Vec primal_update(const Vec& z, double alpha) {
    return -alpha * z;
}

double bregman(const Vec& wstar, const Vec& w) {
    require_same_dim(wstar, w, "bregman");
    return 0.5 * (wstar - w).squaredNorm();
}

}  // namespace ambdg
