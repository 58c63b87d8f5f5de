#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ambdg/consensus.hpp"
#include "ambdg/experiment.hpp"
#include "ambdg/metrics.hpp"
#include "ambdg/optim.hpp"

namespace py = pybind11;
using namespace ambdg;

namespace {

py::dict rows_to_columns(const std::vector<AveragedRow>& rows) {
    py::list upd, wc, ep, st, bt, err, cum;
    for (const AveragedRow& r : rows) {
        upd.append(r.update_index);
        wc.append(r.wall_clock);
        ep.append(r.epoch);
        st.append(r.staleness);
        bt.append(r.batch_total);
        err.append(r.error_rate);
        cum.append(r.cumulative_samples);
    }
    py::dict d;
    d["update_index"] = upd;
    d["wall_clock_s"] = wc;
    d["epoch"] = ep;
    d["staleness"] = st;
    d["batch_total"] = bt;
    d["error_rate"] = err;
    d["cumulative_samples"] = cum;
    return d;
}

py::object json_to_py(const Json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

BoundParams make_params(double j, double l, double c, double sigma2, long tau,
                        double b_bar, double b_hat, long t) {
    BoundParams p;
    p.constants.J = j;
    p.constants.L = l;
    p.constants.C2 = c * c;
    p.constants.sigma2 = sigma2;
    p.tau = tau;
    p.b_bar = b_bar;
    p.b_hat = b_hat;
    p.horizon = t;
    p.m = static_cast<double>(t) * b_bar;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Anytime-minibatch simulator with delayed gradients";

    m.def("step_size",
          [](long t, long tau, double lipschitz, double b_bar) {
              DualAvgState s = make_dual_state(1, tau, lipschitz, b_bar);
              return step_size(s, t);
          },
          py::arg("t"), py::arg("tau") = 0, py::arg("lipschitz") = 0.0, py::arg("b_bar") = 1.0);

    m.def("bound_regret",
          [](double j, double l, double c, double sigma2, long tau, double b_bar,
             double b_hat, long t) {
              return bound_regret_ambdg(make_params(j, l, c, sigma2, tau, b_bar, b_hat, t));
          },
          py::arg("J"), py::arg("L"), py::arg("C"), py::arg("sigma2"), py::arg("tau"),
          py::arg("b_bar"), py::arg("b_hat"), py::arg("T"));

    m.def("bound_gap",
          [](double j, double l, double c, double sigma2, long tau, double b_bar,
             double b_hat, long t) {
              return bound_gap_ambdg(make_params(j, l, c, sigma2, tau, b_bar, b_hat, t));
          },
          py::arg("J"), py::arg("L"), py::arg("C"), py::arg("sigma2"), py::arg("tau"),
          py::arg("b_bar"), py::arg("b_hat"), py::arg("T"));

    m.def("bound_regret_decentralized",
          [](double j, double l, double c, double sigma2, long tau, double b_bar,
             double b_hat, long t, double delta) {
              return bound_regret_decentralized(
                  make_params(j, l, c, sigma2, tau, b_bar, b_hat, t), delta);
          },
          py::arg("J"), py::arg("L"), py::arg("C"), py::arg("sigma2"), py::arg("tau"),
          py::arg("b_bar"), py::arg("b_hat"), py::arg("T"), py::arg("delta"));

    m.def("min_consensus_rounds", &min_consensus_rounds,
          py::arg("n"), py::arg("J"), py::arg("delta"), py::arg("lambda2"));

    m.def("metropolis_weights",
          [](int n, const std::vector<std::pair<int, int>>& edges) {
              WorkerGraph g;
              g.n = n;
              g.edges = edges;
              CommMatrix q = build_comm_matrix(g);
              std::vector<std::vector<double>> out(n, std::vector<double>(n));
              for (int i = 0; i < n; ++i)
                  for (int j = 0; j < n; ++j) out[i][j] = q(i, j);
              return out;
          },
          py::arg("n"), py::arg("edges"));

    m.def("lambda2",
          [](const std::vector<std::vector<double>>& q) {
              const auto n = static_cast<Eigen::Index>(q.size());
              CommMatrix mat(n, n);
              for (Eigen::Index i = 0; i < n; ++i) {
                  if (static_cast<Eigen::Index>(q[i].size()) != n)
                      throw ConfigError("lambda2: matrix must be square");
                  for (Eigen::Index j = 0; j < n; ++j) mat(i, j) = q[i][j];
              }
              return lambda2(mat);
          },
          py::arg("q"));

    m.def("parse_config", [](const std::string& text) {
        ExperimentConfig cfg = parse_config_text(text, "<string>");
        py::dict d;
        d["scheme"] = scheme_name(cfg.scheme);
        d["n"] = cfg.n;
        d["d"] = cfg.d;
        d["replications"] = cfg.replications;
        d["root_seed"] = cfg.root_seed;
        return d;
    });

    m.def("run_config_file",
          [](const std::string& path, int replications, long seed) {
              ExperimentConfig cfg = load_config(path);
              if (replications > 0) cfg.replications = replications;
              if (seed >= 0) cfg.root_seed = static_cast<std::uint64_t>(seed);
              ExperimentResult res = run_experiment(cfg);
              py::dict out;
              out["trace"] = rows_to_columns(res.averaged);
              out["summary"] = json_to_py(res.summary);
              return out;
          },
          py::arg("path"), py::arg("replications") = 0, py::arg("seed") = -1);

    m.def("run_config_text",
          [](const std::string& text) {
              ExperimentConfig cfg = parse_config_text(text, "<string>");
              ExperimentResult res = run_experiment(cfg);
              py::dict out;
              out["trace"] = rows_to_columns(res.averaged);
              out["summary"] = json_to_py(res.summary);
              return out;
          },
          py::arg("text"));

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.attr("__version__") = "0.1.0";
}
