#pragma once

#include <cstdint>
#include <vector>

#include "ambdg/common.hpp"

namespace ambdg {

/// Worker -> master payload: gradient sum, sample count, epoch index and
/// the index of the parameter the gradients were computed against.
struct GradientMsg {
    Vec g_sum;
    long b_count = 0;
    long epoch = 0;
    long param_version = 1;  // gradients are w.r.t. w(param_version)
};

/// Updates the master has made minus the message's parameter version.
/// A negative result means causality broke; the replication aborts.
long staleness(const GradientMsg& msg, long master_update_count);

/// One row per master update.
struct TraceRecord {
    long update_index = 0;
    double wall_clock = 0.0;
    long epoch = 0;
    long staleness = 0;  // hub schemes: exact; k-batch: max over consumed messages
    long batch_total = 0;
    double error_rate = 0.0;
    double w_norm = 0.0;
    long cumulative_samples = 0;
};

/// Seed + count for one worker's epoch so data can be regenerated exactly.
struct EpochStreamRef {
    std::uint64_t seed = 0;
    long count = 0;
};

struct Trace {
    std::vector<TraceRecord> records;
    std::vector<long> msg_staleness;  // one per consumed message, consumption order

    // optional retention for regret evaluation; O(d*T)
    std::vector<std::vector<EpochStreamRef>> epoch_streams;  // [epoch-1][worker]
    std::vector<Vec> w_snapshots;                            // w(t+1) per update

    Vec w_avg;  // running average of w(t+1) over updates
    long total_samples = 0;

    long total_updates() const { return static_cast<long>(records.size()); }
    long b_hat() const;        // min over records of batch_total
    double b_bar_emp() const;  // mean over records of batch_total
};

}  // namespace ambdg
