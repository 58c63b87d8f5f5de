#include "ambdg/timing.hpp"

#include <cmath>

namespace ambdg {

double sample_batch_time(const ShiftedExp& m, Rng& rng) {
    return m.xi + rng.exponential(m.lambda);
}

long minibatch_from_time(double t_p, long b, double t_i) {
    if (t_p <= 0.0) throw ConfigError("minibatch_from_time: T_p must be > 0");
    if (b < 1) throw ConfigError("minibatch_from_time: b must be >= 1");
    if (t_i <= 0.0) throw ConfigError("minibatch_from_time: T_i must be > 0");
    return static_cast<long>(std::floor(static_cast<double>(b) * t_p / t_i));
}

}  // namespace ambdg
