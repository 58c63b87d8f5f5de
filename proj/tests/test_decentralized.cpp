#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ambdg/experiment.hpp"
#include "ambdg/sim_decentralized.hpp"
#include "ambdg/sim_hub.hpp"

using namespace ambdg;

namespace {

ExperimentConfig dec_cfg(int d, long updates) {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::Decentralized;
    cfg.d = d;
    cfg.t_p = 2.5;
    cfg.b = 30;
    cfg.lambda = 2.0 / 3.0;
    cfg.xi = 1.0;
    cfg.noise_var = 1e-3;
    cfg.step_lipschitz = 3.0;
    cfg.step_bbar = 150.0;
    cfg.horizon_updates = updates;
    cfg.replications = 1;
    cfg.root_seed = 17;
    cfg.seed_set = true;
    cfg.graph_path = "<in-memory>";
    return cfg;
}

}  // namespace

TEST_CASE("single node reduces to serial dual averaging") {
    ExperimentConfig cfg = dec_cfg(12, 30);
    cfg.t_round = 0.0;  // no communication
    cfg.consensus_rounds = 1;
    WorkerGraph solo;
    solo.n = 1;
    DecentralizedTrace dt = run_decentralized(cfg, solo, 0);

    ExperimentConfig hub = cfg;
    hub.scheme = Scheme::AmbDg;
    hub.n = 1;
    hub.t_c = 0.0;
    Trace serial = run_ambdg(hub, 0);

    REQUIRE(dt.nodes.size() == 1);
    REQUIRE(dt.nodes[0].records.size() == serial.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i)
        CHECK(dt.nodes[0].records[i].error_rate == serial.records[i].error_rate);  // exact
}

TEST_CASE("exact averaging matches the hub trajectory bit for bit") {
    // tau = 1: one consensus phase per epoch, T_c = T_p
    ExperimentConfig cfg = dec_cfg(20, 25);
    cfg.exact_consensus = true;
    cfg.consensus_rounds = 10;
    cfg.t_round = cfg.t_p / 10.0;
    WorkerGraph g = ring_graph(4);
    DecentralizedTrace dt = run_decentralized(cfg, g, 0);

    ExperimentConfig hub = cfg;
    hub.scheme = Scheme::AmbDg;
    hub.n = 4;
    hub.t_c = cfg.t_p;
    Trace central = run_ambdg(hub, 0);

    REQUIRE(dt.nodes.size() == 4);
    REQUIRE(central.records.size() == dt.nodes[0].records.size());
    for (const Trace& node : dt.nodes)
        for (std::size_t i = 0; i < central.records.size(); ++i) {
            CHECK(node.records[i].error_rate == central.records[i].error_rate);
            CHECK(node.records[i].batch_total == central.records[i].batch_total);
            CHECK(node.records[i].staleness == central.records[i].staleness);
        }
    for (double d : dt.delta_emp) CHECK(d == 0.0);
}

TEST_CASE("near-perfect consensus matches the hub within 1%") {
    ExperimentConfig cfg = dec_cfg(20, 25);
    cfg.bound_j = 10.0;
    cfg.delta = 0.05;
    WorkerGraph g = ring_graph(4);
    const CommMatrix q = build_comm_matrix(g);
    const long bound = min_consensus_rounds(4, cfg.bound_j, cfg.delta, lambda2(q));
    cfg.consensus_rounds = 10 * bound;
    cfg.t_round = cfg.t_p / static_cast<double>(cfg.consensus_rounds);
    DecentralizedTrace dt = run_decentralized(cfg, g, 0);

    ExperimentConfig hub = cfg;
    hub.scheme = Scheme::AmbDg;
    hub.n = 4;
    hub.t_c = cfg.t_p;
    Trace central = run_ambdg(hub, 0);

    REQUIRE(dt.nodes[0].records.size() == central.records.size());
    for (const Trace& node : dt.nodes)
        for (std::size_t i = 0; i < central.records.size(); ++i) {
            const double a = node.records[i].error_rate;
            const double b = central.records[i].error_rate;
            CHECK(std::abs(a - b) <= 0.01 * std::max(1e-6, std::abs(b)));
        }
}

TEST_CASE("delta_emp respects the bound-derived round count in the pipeline") {
    ExperimentConfig cfg = dec_cfg(20, 30);
    cfg.bound_j = 10.0;  // matches the actual gradient scale of this workload
    cfg.delta = 0.05;
    cfg.consensus_rounds = 0;  // derive from the bound
    WorkerGraph g = ring_graph(8);
    const CommMatrix q = build_comm_matrix(g);
    const long expect_rounds = min_consensus_rounds(8, cfg.bound_j, cfg.delta, lambda2(q));
    cfg.t_round = cfg.t_p / static_cast<double>(expect_rounds);
    DecentralizedTrace dt = run_decentralized(cfg, g, 0);
    CHECK(dt.rounds == expect_rounds);
    REQUIRE(!dt.delta_emp.empty());
    for (double d : dt.delta_emp) CHECK(d <= cfg.delta);
}

TEST_CASE("wall clock and staleness of the decentralized pipeline") {
    ExperimentConfig cfg = dec_cfg(6, 12);
    cfg.consensus_rounds = 20;
    cfg.t_round = cfg.t_p / 20.0;  // T_c = T_p, tau = 1
    WorkerGraph g = complete_graph(3);
    DecentralizedTrace dt = run_decentralized(cfg, g, 0);
    CHECK(dt.t_c == doctest::Approx(cfg.t_p).epsilon(1e-12));
    for (std::size_t i = 0; i < dt.mean.records.size(); ++i) {
        const TraceRecord& r = dt.mean.records[i];
        CHECK(r.wall_clock ==
              doctest::Approx((i + 1) * cfg.t_p + dt.t_c).epsilon(1e-12));
        CHECK(r.staleness == std::min<long>(static_cast<long>(i), 1));
    }
}

TEST_CASE("run_experiment drives the decentralized scheme from a graph file") {
    const std::string path = "test_dec_ring4.txt";
    {
        std::ofstream out(path);
        out << "4\n0 1\n1 2\n2 3\n0 3\n";
    }
    ExperimentConfig cfg = dec_cfg(6, 10);
    cfg.graph_path = path;
    cfg.consensus_rounds = 40;
    cfg.t_round = cfg.t_p / 40.0;
    cfg.replications = 2;
    ExperimentResult res = run_experiment(cfg);
    std::remove(path.c_str());
    CHECK(res.averaged.size() == 10);
    CHECK(res.summary["scheme"] == "decentralized");
    CHECK(res.summary.contains("delta_emp_max"));
    CHECK(res.delta_emp_max.size() == 2);
}

TEST_CASE("decentralized validation errors") {
    ExperimentConfig cfg = dec_cfg(4, 5);
    cfg.consensus_rounds = 5;
    cfg.t_round = 0.0;
    WorkerGraph g = ring_graph(4);
    CHECK_THROWS_AS(run_decentralized(cfg, g, 0), ConfigError);  // t_round = 0, n > 1

    cfg.t_round = 0.1;
    WorkerGraph disconnected;
    disconnected.n = 4;
    disconnected.edges = {{0, 1}, {2, 3}};
    CHECK_THROWS_AS(run_decentralized(cfg, disconnected, 0), ConfigError);
}
