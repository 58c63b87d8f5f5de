#pragma once

#include <cstdint>
#include <vector>

#include "ambdg/config.hpp"
#include "ambdg/consensus.hpp"
#include "ambdg/trace.hpp"

namespace ambdg {

struct DecentralizedTrace {
    std::vector<Trace> nodes;       // one trace per node (local error rates)
    Trace mean;                     // across-node mean error rate per update
    std::vector<double> delta_emp;  // per epoch: max_i ||z_i^{(r)}(t+1) - z*(t+1)||
    long rounds = 0;                // consensus rounds actually used
    double lam2 = 0.0;
    double t_c = 0.0;               // rounds * t_round
};

DecentralizedTrace run_decentralized(const ExperimentConfig& cfg, const WorkerGraph& g,
                                     std::uint64_t rep);

/// Loads the graph from cfg.graph_path.
DecentralizedTrace run_decentralized(const ExperimentConfig& cfg, std::uint64_t rep);

}  // namespace ambdg
