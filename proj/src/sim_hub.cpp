#include "ambdg/sim_hub.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <vector>

#include "ambdg/optim.hpp"
#include "ambdg/timing.hpp"

namespace ambdg {

namespace {

double epoch_compute_time(const ExperimentConfig& cfg, std::uint64_t rep_root,
                          int worker, long epoch) {
    const ShiftedExp se(cfg.lambda, cfg.xi);
    if (cfg.deterministic_timing) return se.mean();
    Rng rng(stream_seed(rep_root, StreamPurpose::Timing,
                        static_cast<std::uint64_t>(worker + 1),
                        static_cast<std::uint64_t>(epoch)));
    return sample_batch_time(se, rng);
}

long checked_staleness(long version, long update_index) {
    GradientMsg m;
    m.param_version = version;
    return staleness(m, update_index);
}

struct MasterState {
    DualAvgState dual;
    std::map<long, Vec> versions;  // w(v), v = 1 is all zeros
    long min_live_version = 1;

    void publish(long v, Vec w) { versions.emplace(v, std::move(w)); }
    void prune_below(long v) {
        while (!versions.empty() && versions.begin()->first < v) versions.erase(versions.begin());
        min_live_version = v;
    }
};

void record_update(Trace& trace, long update_index, double wall_clock, long epoch,
                   long stale, long batch_total, const Vec& w_next, const GroundTruth& gt) {
    if (!w_next.allFinite())
        throw NumericError("parameters diverged (non-finite coordinates) at update " +
                           std::to_string(update_index) + "; reduce the step size");
    TraceRecord rec;
    rec.update_index = update_index;
    rec.wall_clock = wall_clock;
    rec.epoch = epoch;
    rec.staleness = stale;
    rec.batch_total = batch_total;
    rec.error_rate = error_rate(w_next, gt);
    rec.w_norm = w_next.norm();
    trace.total_samples += batch_total;
    rec.cumulative_samples = trace.total_samples;
    trace.records.push_back(rec);
}

void update_running_avg(Trace& trace, const Vec& w_next, long t) {
    if (trace.w_avg.size() == 0) trace.w_avg = Vec::Zero(w_next.size());
    trace.w_avg += (w_next - trace.w_avg) / static_cast<double>(t);
}

// AMB-DG and AMB share one epoch-synchronous body so that with T_c = 0 the
// two schemes execute identical floating-point sequences.
Trace run_epoch_synchronous(const ExperimentConfig& cfg, std::uint64_t rep, bool delayed) {
    validate_config(cfg);
    const std::uint64_t rep_root = replication_root(cfg.root_seed, rep);
    Rng gt_rng(stream_seed(rep_root, StreamPurpose::GroundTruth));
    const GroundTruth gt = gen_ground_truth(cfg.d, cfg.noise_var, gt_rng);

    const long tau = delayed ? cfg.scheme_tau() : 0;
    const long step_tau = cfg.step_tau >= 0 ? cfg.step_tau : tau;
    MasterState master;
    master.dual = make_dual_state(cfg.d, step_tau, cfg.step_lipschitz, cfg.effective_step_bbar());
    master.publish(1, Vec::Zero(cfg.d));

    Trace trace;
    trace.w_avg = Vec::Zero(cfg.d);

    Vec g_total(cfg.d);
    Vec g_worker(cfg.d);
    for (long t = 1;; ++t) {
        if (cfg.horizon_updates > 0 && t > cfg.horizon_updates) break;
        // AMB: update k at T_p + T_c/2 + (k-1)(T_p + T_c), written so that at
        // T_c = 0 it is bitwise the AMB-DG expression t*T_p + T_c/2.
        const double update_time =
            delayed ? static_cast<double>(t) * cfg.t_p + cfg.t_c / 2.0
                    : static_cast<double>(t) * cfg.t_p + static_cast<double>(t - 1) * cfg.t_c + cfg.t_c / 2.0;
        if (cfg.horizon_seconds > 0.0 && update_time > cfg.horizon_seconds) break;

        const long v = delayed ? std::max(1L, t - tau) : t;
        const Vec& w_used = master.versions.at(v);

        // the master receives per-worker gradient sums and adds them in
        // worker-ascending order
        g_total.setZero();
        long b_total = 0;
        std::vector<EpochStreamRef> refs;
        for (int i = 0; i < cfg.n; ++i) {
            const double t_i = epoch_compute_time(cfg, rep_root, i, t);
            const long b_i = minibatch_from_time(cfg.t_p, cfg.b, t_i);
            const std::uint64_t dseed = stream_seed(rep_root, StreamPurpose::Data,
                                                    static_cast<std::uint64_t>(i + 1),
                                                    static_cast<std::uint64_t>(t));
            Rng drng(dseed);
            g_worker.setZero();
            accumulate_grad_sum(w_used, gt, b_i, drng, g_worker);
            g_total += g_worker;
            b_total += b_i;
            if (cfg.record_for_regret) refs.push_back({dseed, b_i});
        }

        if (b_total > 0) g_total /= static_cast<double>(b_total);
        dual_update_inplace(master.dual, g_total);
        const double alpha = step_size(master.dual, t + 1);
        Vec w_next = primal_update(master.dual.z, alpha);

        const long stale = checked_staleness(v, t);
        for (int i = 0; i < cfg.n; ++i) trace.msg_staleness.push_back(stale);
        record_update(trace, t, update_time, t, stale, b_total, w_next, gt);
        update_running_avg(trace, w_next, t);
        if (cfg.record_for_regret) {
            trace.w_snapshots.push_back(w_next);
            trace.epoch_streams.push_back(std::move(refs));
        }

        master.publish(t + 1, std::move(w_next));
        master.prune_below(std::max(1L, t + 1 - tau));
    }

    // regret evaluation needs epoch T+1 data; its stream refs are derivable
    // without simulating the epoch
    if (cfg.record_for_regret) {
        const long next_epoch = trace.total_updates() + 1;
        std::vector<EpochStreamRef> refs;
        for (int i = 0; i < cfg.n; ++i) {
            const double t_i = epoch_compute_time(cfg, rep_root, i, next_epoch);
            const long b_i = minibatch_from_time(cfg.t_p, cfg.b, t_i);
            refs.push_back({stream_seed(rep_root, StreamPurpose::Data,
                                        static_cast<std::uint64_t>(i + 1),
                                        static_cast<std::uint64_t>(next_epoch)),
                            b_i});
        }
        trace.epoch_streams.push_back(std::move(refs));
    }
    return trace;
}

struct EventCmp {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.time != b.time) return a.time > b.time;  // min-heap
        return a.seq > b.seq;
    }
};

Trace run_kbatch(const ExperimentConfig& cfg, std::uint64_t rep) {
    validate_config(cfg);
    const std::uint64_t rep_root = replication_root(cfg.root_seed, rep);
    Rng gt_rng(stream_seed(rep_root, StreamPurpose::GroundTruth));
    const GroundTruth gt = gen_ground_truth(cfg.d, cfg.noise_var, gt_rng);

    const long tau = cfg.scheme_tau();
    const long step_tau = cfg.step_tau >= 0 ? cfg.step_tau : tau;
    const long per_msg = cfg.b_tilde / cfg.kbatch_k;

    MasterState master;
    master.dual = make_dual_state(cfg.d, step_tau, cfg.step_lipschitz, cfg.effective_step_bbar());
    master.publish(1, Vec::Zero(cfg.d));

    Trace trace;
    trace.w_avg = Vec::Zero(cfg.d);

    struct Worker {
        long adopted_version = 1;   // latest parameter processed so far
        long inflight_version = 1;  // version used by the batch in flight
        long next_batch = 1;
    };
    std::vector<Worker> workers(cfg.n);

    std::priority_queue<SimEvent, std::vector<SimEvent>, EventCmp> queue;
    long seq = 0;
    auto schedule = [&](SimEvent ev) {
        ev.seq = seq++;
        queue.push(ev);
    };

    auto batch_duration = [&](int worker, long batch_idx) {
        const ShiftedExp se(cfg.lambda, cfg.xi);
        double t_i;
        if (cfg.deterministic_timing) {
            t_i = se.mean();
        } else {
            Rng rng(stream_seed(rep_root, StreamPurpose::Timing,
                                static_cast<std::uint64_t>(worker + 1),
                                static_cast<std::uint64_t>(batch_idx)));
            t_i = sample_batch_time(se, rng);
        }
        return static_cast<double>(per_msg) * t_i / static_cast<double>(cfg.b);
    };

    for (int i = 0; i < cfg.n; ++i) {
        SimEvent ev;
        ev.time = batch_duration(i, 1);
        ev.kind = EventKind::WorkerEpochEnd;
        ev.worker = i;
        ev.index = 1;
        ev.batch_start = 0.0;
        ev.version = 1;
        schedule(ev);
    }

    std::map<std::pair<int, long>, GradientMsg> in_flight;  // (worker, batch) -> message
    std::vector<GradientMsg> pending;                       // arrived, not yet consumed
    long updates = 0;
    bool done = false;

    auto prune_versions = [&]() {
        long live = updates + 1;
        for (const Worker& wk : workers)
            live = std::min(live, std::min(wk.adopted_version, wk.inflight_version));
        master.prune_below(live);
    };

    while (!done && !queue.empty()) {
        const SimEvent ev = queue.top();
        queue.pop();
        switch (ev.kind) {
            case EventKind::WorkerEpochEnd: {
                Worker& wk = workers[ev.worker];
                // gradients of this batch, against the parameter adopted at its start
                GradientMsg msg;
                msg.g_sum = Vec::Zero(cfg.d);
                msg.epoch = ev.index;
                msg.param_version = ev.version;
                Rng drng(stream_seed(rep_root, StreamPurpose::Data,
                                     static_cast<std::uint64_t>(ev.worker + 1),
                                     static_cast<std::uint64_t>(ev.index)));
                msg.b_count = accumulate_grad_sum(master.versions.at(ev.version), gt,
                                                  per_msg, drng, msg.g_sum);
                in_flight.emplace(std::make_pair(ev.worker, ev.index), std::move(msg));

                SimEvent arr;
                arr.time = ev.time + cfg.t_c / 2.0;
                arr.kind = EventKind::MasterReceive;
                arr.worker = ev.worker;
                arr.index = ev.index;
                schedule(arr);

                // next batch starts immediately; a parameter that arrived
                // mid-batch is adopted only now, at the boundary
                SimEvent nxt;
                nxt.time = ev.time + batch_duration(ev.worker, ev.index + 1);
                nxt.kind = EventKind::WorkerEpochEnd;
                nxt.worker = ev.worker;
                nxt.index = ev.index + 1;
                nxt.batch_start = ev.time;
                nxt.version = wk.adopted_version;
                wk.inflight_version = wk.adopted_version;
                wk.next_batch = ev.index + 1;
                schedule(nxt);
                prune_versions();
                break;
            }
            case EventKind::MasterReceive: {
                auto it = in_flight.find({ev.worker, ev.index});
                if (it == in_flight.end())
                    throw InvariantError("kbatch: message arrival without a sent message");
                pending.push_back(std::move(it->second));
                in_flight.erase(it);
                if (static_cast<long>(pending.size()) < cfg.kbatch_k) break;

                // master update at the K-th arrival
                if (cfg.horizon_seconds > 0.0 && ev.time > cfg.horizon_seconds) {
                    done = true;
                    break;
                }
                const long u = updates + 1;
                Vec g_total = Vec::Zero(cfg.d);
                long b_total = 0;
                long max_stale = 0;
                for (const GradientMsg& m : pending) {
                    g_total += m.g_sum;
                    b_total += m.b_count;
                    const long st = staleness(m, u);
                    trace.msg_staleness.push_back(st);
                    max_stale = std::max(max_stale, st);
                }
                pending.clear();
                if (b_total > 0) g_total /= static_cast<double>(b_total);
                dual_update_inplace(master.dual, g_total);
                const double alpha = step_size(master.dual, u + 1);
                Vec w_next = primal_update(master.dual.z, alpha);

                record_update(trace, u, ev.time, u, max_stale, b_total, w_next, gt);
                update_running_avg(trace, w_next, u);
                master.publish(u + 1, std::move(w_next));
                updates = u;

                SimEvent bcast;
                bcast.time = ev.time + cfg.t_c / 2.0;
                bcast.kind = EventKind::WorkerReceiveParams;
                bcast.version = u + 1;
                schedule(bcast);

                if (cfg.horizon_updates > 0 && updates >= cfg.horizon_updates) done = true;
                break;
            }
            case EventKind::WorkerReceiveParams: {
                for (Worker& wk : workers) wk.adopted_version = std::max(wk.adopted_version, ev.version);
                break;
            }
            case EventKind::MasterUpdate:
                break;  // updates are folded into the K-th MasterReceive
        }
    }
    return trace;
}

}  // namespace

GroundTruth replication_ground_truth(const ExperimentConfig& cfg, std::uint64_t rep) {
    const std::uint64_t rep_root = replication_root(cfg.root_seed, rep);
    Rng gt_rng(stream_seed(rep_root, StreamPurpose::GroundTruth));
    return gen_ground_truth(cfg.d, cfg.noise_var, gt_rng);
}

Trace run_ambdg(const ExperimentConfig& cfg, std::uint64_t rep) {
    return run_epoch_synchronous(cfg, rep, /*delayed=*/true);
}

Trace run_amb(const ExperimentConfig& cfg, std::uint64_t rep) {
    return run_epoch_synchronous(cfg, rep, /*delayed=*/false);
}

Trace run_kbatch_async(const ExperimentConfig& cfg, std::uint64_t rep) {
    return run_kbatch(cfg, rep);
}

Trace run_hub(const ExperimentConfig& cfg, std::uint64_t rep) {
    switch (cfg.scheme) {
        case Scheme::AmbDg: return run_ambdg(cfg, rep);
        case Scheme::Amb: return run_amb(cfg, rep);
        case Scheme::KBatchAsync: return run_kbatch_async(cfg, rep);
        case Scheme::Decentralized:
            throw ConfigError("run_hub: decentralized scheme uses run_decentralized");
    }
    throw ConfigError("run_hub: unknown scheme");
}

}  // namespace ambdg
