#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ambdg/config.hpp"
#include "ambdg/sim_decentralized.hpp"
#include "ambdg/sim_hub.hpp"

namespace ambdg {

using Json = nlohmann::ordered_json;

/// One row of the replication-averaged trace (means at matched update index).
struct AveragedRow {
    long update_index = 0;
    double wall_clock = 0.0;
    double epoch = 0.0;
    double staleness = 0.0;
    double batch_total = 0.0;
    double error_rate = 0.0;
    double cumulative_samples = 0.0;
};

std::vector<AveragedRow> average_traces(const std::vector<Trace>& reps);

std::string trace_csv(const std::vector<AveragedRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<AveragedRow>& rows);
std::vector<AveragedRow> read_trace_csv(const std::string& path);

/// First wall-clock at which the averaged error is <= target; empty if never.
std::optional<double> time_to_error(const std::vector<AveragedRow>& rows, double target);

struct ExperimentResult {
    std::vector<Trace> reps;            // per replication (mean trace for decentralized)
    std::vector<AveragedRow> averaged;
    Json summary;
    std::vector<double> delta_emp_max;  // decentralized only, per replication
};

/// Runs cfg.replications independent seeded replications (concurrently when
/// hardware allows; results are reduced in replication order).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes trace.csv and summary.json under out_dir.
void write_artifacts(const ExperimentResult& result, const std::string& out_dir);

/// Wall-clock time each trace first reaches each target plus pairwise speedups.
Json compare_traces(const std::vector<std::string>& csv_paths,
                    const std::vector<double>& targets);

/// Evaluates the regret/gap bound expressions from the config's [bounds] section.
Json evaluate_bounds(const ExperimentConfig& cfg);

}  // namespace ambdg
