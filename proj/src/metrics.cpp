#include "ambdg/metrics.hpp"

#include <cmath>
#include <limits>

#include "ambdg/linreg.hpp"
#include "ambdg/sim_hub.hpp"

namespace ambdg {

void validate_bound_params(const BoundParams& p) {
    if (p.constants.J < 0 || p.constants.L < 0 || p.constants.sigma2 < 0 || p.constants.C2 < 0)
        throw ConfigError("bound params: assumption constants must be >= 0");
    if (p.tau < 0) throw ConfigError("bound params: tau must be >= 0");
    if (!(p.b_hat > 0)) throw ConfigError("bound params: b_hat must be > 0");
    if (p.b_hat > p.b_bar) throw ConfigError("bound params: b_hat must be <= b_bar");
    if (p.horizon < 1) throw ConfigError("bound params: T must be >= 1");
    const double expected_m = static_cast<double>(p.horizon) * p.b_bar;
    if (std::abs(p.m - expected_m) > 1e-9 * std::max(1.0, expected_m))
        throw ConfigError("bound params: m must equal T * b_bar");
}

double bound_regret_ambdg(const BoundParams& p) {
    validate_bound_params(p);
    const double J = p.constants.J, L = p.constants.L;
    const double C = std::sqrt(p.constants.C2);
    const double tau = static_cast<double>(p.tau);
    const double T = static_cast<double>(p.horizon);

    const double inv_alpha = L + std::sqrt((T + 1.0 + tau) / p.b_bar);
    const double t1 = p.b_bar * (p.constants.C2 / 2.0) * inv_alpha;
    const double t2 = 2.0 * tau * J * C * p.b_bar;
    const double t3 = 2.0 * L * J * J * (tau + 1.0) * (tau + 1.0) * p.b_bar * p.b_bar *
                      (1.0 + std::log(T));
    const double t4 = (p.b_bar / p.b_hat) * p.constants.sigma2 * std::sqrt(p.m);
    return t1 + t2 + t3 + t4;
}

double bound_gap_ambdg(const BoundParams& p) {
    validate_bound_params(p);
    const double J = p.constants.J, L = p.constants.L;
    const double C = std::sqrt(p.constants.C2);
    const double tau = static_cast<double>(p.tau);
    const double T = static_cast<double>(p.horizon);

    const double inv_alpha = L + std::sqrt((T + 1.0 + tau) / p.b_bar);
    const double t1 = (p.constants.C2 / (2.0 * p.m)) * inv_alpha;
    const double t2 = 2.0 * tau * J * C / p.m;
    const double t3 = 2.0 * L * J * J * (tau + 1.0) * (tau + 1.0) * p.b_bar *
                      (1.0 + std::log(T)) / p.m;
    const double t4 = p.constants.sigma2 / (p.b_hat * std::sqrt(p.m));
    return p.b_bar * (t1 + t2 + t3 + t4);
}

double bound_regret_decentralized(const BoundParams& p, double delta) {
    if (delta < 0) throw ConfigError("bound_regret_decentralized: delta must be >= 0");
    const double extra = delta == 0.0
                             ? 0.0
                             : 2.0 * p.constants.J * delta * std::pow(p.b_bar, 1.5) * std::sqrt(p.m);
    return bound_regret_ambdg(p) + extra;
}

std::vector<double> regret_from_trace(const Trace& trace, const ExperimentConfig& cfg,
                                      std::uint64_t rep) {
    const long T = trace.total_updates();
    if (trace.w_snapshots.size() != static_cast<std::size_t>(T) ||
        trace.epoch_streams.size() < static_cast<std::size_t>(T + 1))
        throw ConfigError("regret_from_trace: trace is missing stream metadata "
                          "(run with record_for_regret)");

    const GroundTruth gt = replication_ground_truth(cfg, rep);
    std::vector<double> cumulative;
    cumulative.reserve(T);
    double total = 0.0;
    Vec zeta(gt.wstar.size());
    double y = 0.0;
    for (long t = 1; t <= T; ++t) {
        const Vec& w = trace.w_snapshots[static_cast<std::size_t>(t - 1)];  // w(t+1)
        const auto& refs = trace.epoch_streams[static_cast<std::size_t>(t)];  // epoch t+1
        for (const EpochStreamRef& ref : refs) {
            Rng rng(ref.seed);
            for (long s = 0; s < ref.count; ++s) {
                sample_point_into(gt, rng, zeta, y);
                const double rw = zeta.dot(w) - y;
                const double rs = zeta.dot(gt.wstar) - y;
                total += rw * rw - rs * rs;
            }
        }
        cumulative.push_back(total);
    }
    return cumulative;
}

double optimality_gap(const Trace& trace, const GroundTruth& gt) {
    if (trace.w_avg.size() == 0)
        throw ConfigError("optimality_gap: trace has no running average");
    require_same_dim(trace.w_avg, gt.wstar, "optimality_gap");
    return (trace.w_avg - gt.wstar).squaredNorm();
}

std::map<long, double> staleness_histogram(const Trace& trace) {
    std::map<long, double> hist;
    if (trace.msg_staleness.empty()) return hist;
    for (long s : trace.msg_staleness) hist[s] += 1.0;
    const double total = static_cast<double>(trace.msg_staleness.size());
    for (auto& [k, v] : hist) v /= total;
    return hist;
}

BatchStats batch_stats(const Trace& trace) {
    if (trace.records.empty()) throw ConfigError("batch_stats: empty trace");
    BatchStats st;
    st.b_hat = trace.b_hat();
    st.b_bar = trace.b_bar_emp();
    st.ratio = st.b_hat > 0 ? st.b_bar / static_cast<double>(st.b_hat)
                            : std::numeric_limits<double>::infinity();
    return st;
}

}  // namespace ambdg
