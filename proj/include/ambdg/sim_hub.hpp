#pragma once

#include <cstdint>

#include "ambdg/config.hpp"
#include "ambdg/linreg.hpp"
#include "ambdg/trace.hpp"

namespace ambdg {

enum class EventKind { WorkerEpochEnd, MasterReceive, MasterUpdate, WorkerReceiveParams };

/// Discrete events are processed in (time, seq) lexicographic order; seq is
/// assigned at scheduling time and unique.
struct SimEvent {
    double time = 0.0;
    long seq = 0;
    EventKind kind = EventKind::WorkerEpochEnd;
    int worker = -1;
    long index = 0;         // epoch / batch / update index
    double batch_start = 0; // k-batch: start time of the batch that ended
    long version = 1;       // k-batch: parameter version carried by the event
};

/// The ground truth used by replication `rep` of an experiment (w* and noise),
/// regenerable from the config alone.
GroundTruth replication_ground_truth(const ExperimentConfig& cfg, std::uint64_t rep);

Trace run_ambdg(const ExperimentConfig& cfg, std::uint64_t rep);
Trace run_amb(const ExperimentConfig& cfg, std::uint64_t rep);
Trace run_kbatch_async(const ExperimentConfig& cfg, std::uint64_t rep);

/// Dispatch on cfg.scheme (hub schemes only).
Trace run_hub(const ExperimentConfig& cfg, std::uint64_t rep);

}  // namespace ambdg
