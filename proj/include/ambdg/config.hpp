#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ambdg/common.hpp"

namespace ambdg {

enum class Scheme { AmbDg, Amb, KBatchAsync, Decentralized };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ExperimentConfig {
    Scheme scheme = Scheme::AmbDg;

    int n = 1;
    int d = 2;
    double t_p = 1.0;
    double t_c = 0.0;
    long b = 60;           // reference batch of the timing model
    double lambda = 1.0;   // shifted-exp rate
    double xi = 0.0;       // shifted-exp shift
    double noise_var = 1e-3;

    // step-size schedule; step_bbar <= 0 means default n*b
    double step_lipschitz = 0.0;
    double step_bbar = 0.0;
    long step_tau = -1;  // -1: scheme default (ceil(T_c/T_p) for ambdg/kbatch, 0 for amb)

    // k-batch async
    long kbatch_k = 0;
    long b_tilde = 0;

    // horizon: exactly one of these is set
    long horizon_updates = 0;
    double horizon_seconds = 0.0;

    int replications = 1;
    std::uint64_t root_seed = 0;
    bool seed_set = false;

    bool deterministic_timing = false;  // T_i == xi + 1/lambda, no draw
    bool record_for_regret = false;     // retain snapshots + stream refs

    // decentralized
    std::string graph_path;
    long consensus_rounds = 0;
    double t_round = 0.0;
    double delta = 0.0;           // consensus target used for diagnostics
    bool exact_consensus = false; // idealized mixing (testing / reference)
    double bound_j = 0.0;         // J used when consensus_rounds == 0 (auto from bound)

    // constants for bound evaluation (`bounds` subcommand)
    double bnd_j = 0.0, bnd_l = 0.0, bnd_c = 0.0, bnd_sigma2 = 0.0;
    double bnd_b_hat = 0.0;
    bool bounds_set = false;

    std::vector<double> targets{0.5, 0.35, 0.2};

    double effective_step_bbar() const {
        return step_bbar > 0.0 ? step_bbar : static_cast<double>(n) * static_cast<double>(b);
    }
    long scheme_tau() const;  // staleness parameter ceil(T_c/T_p) (0 for amb)
};

/// Parses a flat key = value file with optional [scheme] sections; keys in a
/// section apply only when that scheme is selected. Throws ConfigError with
/// field name and line number on any violation.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

void validate_config(const ExperimentConfig& cfg);

}  // namespace ambdg
