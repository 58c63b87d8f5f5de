#pragma once

#include "ambdg/common.hpp"
#include "ambdg/rng.hpp"

namespace ambdg {

/// Shifted exponential compute-time model: T = xi + Exp(lambda), mean xi + 1/lambda.
/// T is the time a worker needs for one reference batch of b gradients.
struct ShiftedExp {
    double lambda = 1.0;
    double xi = 0.0;

    ShiftedExp(double lambda_, double xi_) : lambda(lambda_), xi(xi_) {
        if (lambda <= 0.0) throw ConfigError("ShiftedExp: lambda must be > 0");
        if (xi < 0.0) throw ConfigError("ShiftedExp: xi must be >= 0");
    }

    double mean() const { return xi + 1.0 / lambda; }
};

double sample_batch_time(const ShiftedExp& m, Rng& rng);

/// Samples a worker completes in T_p seconds when b gradients take T_i seconds:
/// floor(b * T_p / T_i). May exceed b when T_i < T_p.
long minibatch_from_time(double t_p, long b, double t_i);

}  // namespace ambdg
