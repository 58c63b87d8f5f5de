#include "ambdg/sim_decentralized.hpp"

#include <cmath>
#include <deque>

#include "ambdg/linreg.hpp"
#include "ambdg/optim.hpp"
#include "ambdg/timing.hpp"

namespace ambdg {

namespace {

// Latest index whose consensus phase has completed by wall-clock `time`,
// given phase s ends at s*T_p + T_c. Guarded against T_c/T_p rounding.
long completed_phase_at(double time, double t_p, double t_c) {
    return static_cast<long>(std::floor((time - t_c) / t_p + 1e-9));
}

struct NodeState {
    std::deque<Vec> z_hist;  // z(v) for v in [z_base, z_base + size)
    std::deque<Vec> w_hist;  // w(v) likewise
    long z_base = 1;
    long w_base = 1;

    const Vec& z_at(long v) const { return z_hist.at(static_cast<std::size_t>(v - z_base)); }
    const Vec& w_at(long v) const { return w_hist.at(static_cast<std::size_t>(v - w_base)); }
    void push_z(Vec z, long keep) {
        z_hist.push_back(std::move(z));
        while (static_cast<long>(z_hist.size()) > keep) {
            z_hist.pop_front();
            ++z_base;
        }
    }
    void push_w(Vec w, long keep) {
        w_hist.push_back(std::move(w));
        while (static_cast<long>(w_hist.size()) > keep) {
            w_hist.pop_front();
            ++w_base;
        }
    }
};

}  // namespace

DecentralizedTrace run_decentralized(const ExperimentConfig& cfg, std::uint64_t rep) {
    return run_decentralized(cfg, load_graph(cfg.graph_path), rep);
}

DecentralizedTrace run_decentralized(const ExperimentConfig& cfg, const WorkerGraph& g,
                                     std::uint64_t rep) {
    if (!is_connected(g)) throw ConfigError("run_decentralized: graph is not connected");
    if (g.n > 1 && !(cfg.t_round > 0.0))
        throw ConfigError("run_decentralized: t_round must be > 0 for n > 1");

    const int n = g.n;
    const CommMatrix q = build_comm_matrix(g);
    const double lam2_q = lambda2(q);
    const long rounds = cfg.consensus_rounds > 0
                            ? cfg.consensus_rounds
                            : min_consensus_rounds(n, cfg.bound_j, cfg.delta, lam2_q);
    const double t_c = static_cast<double>(rounds) * cfg.t_round;
    const long tau = t_c <= 0.0 ? 0 : static_cast<long>(std::ceil(t_c / cfg.t_p - 1e-9));
    const long step_tau = cfg.step_tau >= 0 ? cfg.step_tau : tau;
    const long keep = tau + 2;

    const std::uint64_t rep_root = replication_root(cfg.root_seed, rep);
    Rng gt_rng(stream_seed(rep_root, StreamPurpose::GroundTruth));
    const GroundTruth gt = gen_ground_truth(cfg.d, cfg.noise_var, gt_rng);

    const ShiftedExp se(cfg.lambda, cfg.xi);
    const double bbar_ss = cfg.step_bbar > 0.0 ? cfg.step_bbar
                                               : static_cast<double>(n) * static_cast<double>(cfg.b);

    // a single node has nothing to mix; its consensus is trivially exact
    const bool exact = cfg.exact_consensus || n == 1;

    DecentralizedTrace out;
    out.rounds = rounds;
    out.lam2 = lam2_q;
    out.t_c = t_c;
    out.nodes.resize(n);
    for (auto& tr : out.nodes) tr.w_avg = Vec::Zero(cfg.d);
    out.mean.w_avg = Vec::Zero(cfg.d);

    std::vector<NodeState> nodes(n);
    for (auto& ns : nodes) {
        ns.push_z(Vec::Zero(cfg.d), keep);
        ns.push_w(Vec::Zero(cfg.d), keep);
    }

    // exact-consensus mode shares one dual, updated master-style
    DualAvgState shared = make_dual_state(cfg.d, step_tau, cfg.step_lipschitz, bbar_ss);
    std::deque<Vec> shared_hist;  // z(v) for the shared dual, base 1
    shared_hist.push_back(shared.z);
    long shared_base = 1;

    std::vector<Vec> grad_sums(n);
    std::vector<long> counts(n);

    for (long t = 1;; ++t) {
        if (cfg.horizon_updates > 0 && t > cfg.horizon_updates) break;
        const double phase_end = static_cast<double>(t) * cfg.t_p + t_c;
        if (cfg.horizon_seconds > 0.0 && phase_end > cfg.horizon_seconds) break;

        const double epoch_start = static_cast<double>(t - 1) * cfg.t_p;
        // parameter in effect during epoch t: latest whose phase completed by
        // the epoch start (w(s+1) completes at s*T_p + T_c)
        const long v_w = std::min(t, std::max(1L, completed_phase_at(epoch_start, cfg.t_p, t_c) + 1));
        // dual fed into phase t: latest completed by the phase start t*T_p
        const long v_z = std::min(t, std::max(1L, completed_phase_at(static_cast<double>(t) * cfg.t_p,
                                                                     cfg.t_p, t_c) + 1));

        long b_total = 0;
        for (int i = 0; i < n; ++i) {
            double t_i;
            if (cfg.deterministic_timing) {
                t_i = se.mean();
            } else {
                Rng trng(stream_seed(rep_root, StreamPurpose::Timing,
                                     static_cast<std::uint64_t>(i + 1),
                                     static_cast<std::uint64_t>(t)));
                t_i = sample_batch_time(se, trng);
            }
            counts[i] = minibatch_from_time(cfg.t_p, cfg.b, t_i);
            grad_sums[i] = Vec::Zero(cfg.d);
            Rng drng(stream_seed(rep_root, StreamPurpose::Data,
                                 static_cast<std::uint64_t>(i + 1),
                                 static_cast<std::uint64_t>(t)));
            accumulate_grad_sum(nodes[i].w_at(v_w), gt, counts[i], drng, grad_sums[i]);
            b_total += counts[i];
        }

        const double alpha = step_size(shared, t + 1);  // shared carries the schedule constants
        double delta_t = 0.0;

        if (exact) {
            // idealized mixing: every node holds the exact average; executed in
            // the hub master's op order so trajectories coincide bit for bit
            Vec g_total = Vec::Zero(cfg.d);
            for (int i = 0; i < n; ++i) g_total += grad_sums[i];
            if (b_total > 0) g_total /= static_cast<double>(b_total);
            shared.z = shared_hist.at(static_cast<std::size_t>(v_z - shared_base));
            dual_update_inplace(shared, g_total);
            shared_hist.push_back(shared.z);
            while (static_cast<long>(shared_hist.size()) > keep) {
                shared_hist.pop_front();
                ++shared_base;
            }
            Vec w_next = primal_update(shared.z, alpha);
            for (int i = 0; i < n; ++i) {
                nodes[i].push_z(shared.z, keep);
                nodes[i].push_w(w_next, keep);
            }
        } else {
            std::vector<NodeMessage> msgs(n);
            for (int i = 0; i < n; ++i) {
                const double nb = static_cast<double>(n) * static_cast<double>(counts[i]);
                if (counts[i] > 0) {
                    const Vec g_i = grad_sums[i] / static_cast<double>(counts[i]);
                    msgs[i].vec = nb * (nodes[i].z_at(v_z) + g_i);
                } else {
                    msgs[i].vec = Vec::Zero(cfg.d);
                }
                msgs[i].scal = nb;
            }
            // exact ratio-average of the same inputs: the r -> inf limit of this phase
            Vec star_num = Vec::Zero(cfg.d);
            for (int i = 0; i < n; ++i) star_num += msgs[i].vec;
            Vec z_star = b_total > 0 ? Vec((star_num / static_cast<double>(n)) /
                                           static_cast<double>(b_total))
                                     : nodes[0].z_at(v_z);

            std::vector<NodeMessage> mixed = consensus_phase(std::move(msgs), q, rounds);
            for (int i = 0; i < n; ++i) {
                Vec z_next = b_total > 0 ? node_dual_update(mixed[i])
                                         : nodes[i].z_at(v_z);
                delta_t = std::max(delta_t, (z_next - z_star).norm());
                nodes[i].push_w(primal_update(z_next, alpha), keep);
                nodes[i].push_z(std::move(z_next), keep);
            }
        }

        out.delta_emp.push_back(delta_t);
        const long stale = t - v_w;
        double err_sum = 0.0;
        Vec w_mean = Vec::Zero(cfg.d);
        for (int i = 0; i < n; ++i) {
            const Vec& w_next = nodes[i].w_hist.back();
            if (!w_next.allFinite())
                throw NumericError("node " + std::to_string(i) +
                                   " diverged (non-finite parameters) at update " +
                                   std::to_string(t) + "; reduce the step size");
            Trace& tr = out.nodes[i];
            TraceRecord rec;
            rec.update_index = t;
            rec.wall_clock = phase_end;
            rec.epoch = t;
            rec.staleness = stale;
            rec.batch_total = b_total;
            rec.error_rate = error_rate(w_next, gt);
            rec.w_norm = w_next.norm();
            tr.total_samples += b_total;
            rec.cumulative_samples = tr.total_samples;
            tr.records.push_back(rec);
            tr.msg_staleness.push_back(stale);
            tr.w_avg += (w_next - tr.w_avg) / static_cast<double>(t);
            err_sum += rec.error_rate;
            w_mean += w_next / static_cast<double>(n);
        }
        out.mean.w_avg += (w_mean - out.mean.w_avg) / static_cast<double>(t);
        TraceRecord mrec = out.nodes[0].records.back();
        mrec.error_rate = err_sum / static_cast<double>(n);
        out.mean.total_samples += b_total;
        mrec.cumulative_samples = out.mean.total_samples;
        out.mean.records.push_back(mrec);
        out.mean.msg_staleness.push_back(stale);
    }

    return out;
}

}  // namespace ambdg
