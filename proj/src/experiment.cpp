#include "ambdg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "ambdg/metrics.hpp"

namespace ambdg {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::vector<AveragedRow> average_traces(const std::vector<Trace>& reps) {
    if (reps.empty()) throw ConfigError("average_traces: no replications");
    std::size_t rows = reps.front().records.size();
    for (const Trace& t : reps) rows = std::min(rows, t.records.size());
    std::vector<AveragedRow> out(rows);
    const double r = static_cast<double>(reps.size());
    for (std::size_t k = 0; k < rows; ++k) {
        AveragedRow& row = out[k];
        row.update_index = reps.front().records[k].update_index;
        for (const Trace& t : reps) {
            const TraceRecord& rec = t.records[k];
            if (rec.update_index != row.update_index)
                throw InvariantError("average_traces: traces are not index-aligned");
            row.wall_clock += rec.wall_clock / r;
            row.epoch += static_cast<double>(rec.epoch) / r;
            row.staleness += static_cast<double>(rec.staleness) / r;
            row.batch_total += static_cast<double>(rec.batch_total) / r;
            row.error_rate += rec.error_rate / r;
            row.cumulative_samples += static_cast<double>(rec.cumulative_samples) / r;
        }
    }
    return out;
}

std::string trace_csv(const std::vector<AveragedRow>& rows) {
    std::ostringstream os;
    os << "update_index,wall_clock_s,epoch,staleness,batch_total,error_rate,cumulative_samples\n";
    for (const AveragedRow& r : rows) {
        os << r.update_index << ',' << fmt_double(r.wall_clock) << ',' << fmt_double(r.epoch)
           << ',' << fmt_double(r.staleness) << ',' << fmt_double(r.batch_total) << ','
           << fmt_double(r.error_rate) << ',' << fmt_double(r.cumulative_samples) << '\n';
    }
    return os.str();
}

void write_trace_csv(const std::string& path, const std::vector<AveragedRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write trace file '" + path + "'");
    out << trace_csv(rows);
}

std::vector<AveragedRow> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file '" + path + "'");
    std::string header;
    if (!std::getline(in, header))
        throw ConfigError("trace file '" + path + "' is empty");
    std::vector<std::string> cols;
    {
        std::istringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    auto col = [&](const std::string& name) {
        auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end())
            throw ConfigError("trace file '" + path + "' lacks column '" + name + "'");
        return static_cast<std::size_t>(it - cols.begin());
    };
    const std::size_t ci_upd = col("update_index"), ci_wc = col("wall_clock_s"),
                      ci_ep = col("epoch"), ci_st = col("staleness"), ci_bt = col("batch_total"),
                      ci_err = col("error_rate"), ci_cum = col("cumulative_samples");
    std::vector<AveragedRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != cols.size())
            throw ConfigError("trace file '" + path + "': malformed row");
        AveragedRow r;
        r.update_index = static_cast<long>(vals[ci_upd]);
        r.wall_clock = vals[ci_wc];
        r.epoch = vals[ci_ep];
        r.staleness = vals[ci_st];
        r.batch_total = vals[ci_bt];
        r.error_rate = vals[ci_err];
        r.cumulative_samples = vals[ci_cum];
        rows.push_back(r);
    }
    return rows;
}

std::optional<double> time_to_error(const std::vector<AveragedRow>& rows, double target) {
    for (const AveragedRow& r : rows)
        if (r.error_rate <= target) return r.wall_clock;
    return std::nullopt;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    ExperimentResult result;
    result.reps.resize(cfg.replications);
    std::vector<double> dmax(cfg.replications, 0.0);

    auto run_one = [&cfg](std::uint64_t rep, double* delta_out) {
        if (cfg.scheme == Scheme::Decentralized) {
            DecentralizedTrace dt = run_decentralized(cfg, rep);
            double dm = 0.0;
            for (double d : dt.delta_emp) dm = std::max(dm, d);
            *delta_out = dm;
            return std::move(dt.mean);
        }
        return run_hub(cfg, rep);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (cfg.replications > 1 && hw > 1) {
        std::vector<std::future<Trace>> futs(cfg.replications);
        for (int r = 0; r < cfg.replications; ++r)
            futs[r] = std::async(std::launch::async, run_one,
                                 static_cast<std::uint64_t>(r), &dmax[r]);
        for (int r = 0; r < cfg.replications; ++r) result.reps[r] = futs[r].get();
    } else {
        for (int r = 0; r < cfg.replications; ++r)
            result.reps[r] = run_one(static_cast<std::uint64_t>(r), &dmax[r]);
    }

    result.averaged = average_traces(result.reps);
    if (cfg.scheme == Scheme::Decentralized) result.delta_emp_max = dmax;

    // summary
    long b_hat = 0;
    double b_sum = 0.0;
    long rec_count = 0;
    bool first = true;
    std::map<long, double> hist;
    double msg_count = 0.0;
    for (const Trace& t : result.reps) {
        for (const TraceRecord& rec : t.records) {
            if (first || rec.batch_total < b_hat) b_hat = rec.batch_total;
            first = false;
            b_sum += static_cast<double>(rec.batch_total);
            ++rec_count;
        }
        for (long s : t.msg_staleness) {
            hist[s] += 1.0;
            msg_count += 1.0;
        }
    }
    const double b_bar = rec_count > 0 ? b_sum / static_cast<double>(rec_count) : 0.0;

    Json summary;
    summary["scheme"] = scheme_name(cfg.scheme);
    summary["b_hat"] = b_hat;
    summary["b_bar"] = b_bar;
    summary["ratio"] = b_hat > 0 ? b_bar / static_cast<double>(b_hat) : 0.0;
    Json tte = Json::object();
    for (double target : cfg.targets) {
        auto t = time_to_error(result.averaged, target);
        tte[fmt_double(target)] = t ? Json(*t) : Json(nullptr);
    }
    summary["time_to_error"] = tte;
    Json jh = Json::object();
    for (auto& [k, v] : hist) jh[std::to_string(k)] = v / msg_count;
    summary["staleness_histogram"] = jh;
    summary["seed"] = cfg.root_seed;
    summary["replications"] = cfg.replications;
    if (cfg.scheme == Scheme::Decentralized) {
        double dm = 0.0;
        for (double d : dmax) dm = std::max(dm, d);
        summary["delta_emp_max"] = dm;
    }
    result.summary = std::move(summary);
    return result;
}

void write_artifacts(const ExperimentResult& result, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_trace_csv(out_dir + "/trace.csv", result.averaged);
    std::ofstream js(out_dir + "/summary.json", std::ios::binary);
    if (!js) throw ConfigError("cannot write summary under '" + out_dir + "'");
    js << result.summary.dump(2) << '\n';
}

Json compare_traces(const std::vector<std::string>& csv_paths,
                    const std::vector<double>& targets) {
    if (csv_paths.size() < 2)
        throw ConfigError("compare: need at least two trace files");
    struct Loaded {
        std::string path;
        std::vector<AveragedRow> rows;
    };
    std::vector<Loaded> traces;
    for (const std::string& p : csv_paths) traces.push_back({p, read_trace_csv(p)});

    Json out;
    out["targets"] = targets;
    Json jt = Json::array();
    for (const Loaded& t : traces) {
        Json entry;
        entry["file"] = t.path;
        Json tte = Json::object();
        for (double target : targets) {
            auto tt = time_to_error(t.rows, target);
            tte[fmt_double(target)] = tt ? Json(*tt) : Json(nullptr);
        }
        entry["time_to_error"] = tte;
        jt.push_back(entry);
    }
    out["traces"] = jt;

    Json pairs = Json::array();
    for (std::size_t a = 0; a < traces.size(); ++a) {
        for (std::size_t b = 0; b < traces.size(); ++b) {
            if (a == b) continue;
            for (double target : targets) {
                auto ta = time_to_error(traces[a].rows, target);
                auto tb = time_to_error(traces[b].rows, target);
                Json p;
                p["a"] = traces[a].path;
                p["b"] = traces[b].path;
                p["target"] = target;
                if (ta && tb)
                    p["speedup_a_over_b"] = *tb / *ta;
                else
                    p["speedup_a_over_b"] = nullptr;  // target unreached somewhere
                pairs.push_back(p);
            }
        }
    }
    out["pairs"] = pairs;
    return out;
}

Json evaluate_bounds(const ExperimentConfig& cfg) {
    if (!cfg.bounds_set)
        throw ConfigError("bounds: config has no [bounds] section");
    if (cfg.horizon_updates < 1)
        throw ConfigError("bounds: horizon_updates (T) must be set");
    BoundParams p;
    p.constants.J = cfg.bnd_j;
    p.constants.L = cfg.bnd_l;
    p.constants.C2 = cfg.bnd_c * cfg.bnd_c;
    p.constants.sigma2 = cfg.bnd_sigma2;
    p.tau = cfg.step_tau >= 0 ? cfg.step_tau : cfg.scheme_tau();
    p.b_bar = cfg.effective_step_bbar();
    p.b_hat = cfg.bnd_b_hat > 0 ? cfg.bnd_b_hat : p.b_bar;
    p.horizon = cfg.horizon_updates;
    p.m = static_cast<double>(p.horizon) * p.b_bar;

    Json out;
    out["tau"] = p.tau;
    out["b_bar"] = p.b_bar;
    out["b_hat"] = p.b_hat;
    out["T"] = p.horizon;
    out["m"] = p.m;
    out["regret_bound"] = bound_regret_ambdg(p);
    out["gap_bound"] = bound_gap_ambdg(p);
    out["regret_bound_decentralized"] = bound_regret_decentralized(p, cfg.delta);
    out["delta"] = cfg.delta;
    return out;
}

}  // namespace ambdg
