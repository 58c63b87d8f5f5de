#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ambdg/common.hpp"

namespace ambdg {

/// Undirected connected worker graph.
struct WorkerGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Edge-list text format: first line "n", then one "i j" pair per line (0-based).
WorkerGraph load_graph(const std::string& path);
WorkerGraph parse_graph_text(const std::string& text, const std::string& origin);
bool is_connected(const WorkerGraph& g);

WorkerGraph ring_graph(int n);
WorkerGraph complete_graph(int n);
WorkerGraph path_graph(int n);

using CommMatrix = Eigen::MatrixXd;

/// Metropolis-Hastings weights, then the lazy transform Q <- (I + Q)/2 which
/// makes the matrix positive semi-definite for any connected graph.
CommMatrix build_comm_matrix(const WorkerGraph& g);

/// Checks doubly stochastic (1e-12), symmetry, PSD (min eig >= -1e-10) and the
/// sparsity pattern; throws ConfigError on violation.
void validate_comm_matrix(const CommMatrix& q, const WorkerGraph& g);

/// Second-largest eigenvalue via power iteration on Q deflated by the all-ones
/// eigenvector; tolerance 1e-10. n = 1 is defined as 0.
double lambda2(const CommMatrix& q);

/// ceil(log(2 sqrt(n) (1 + 2J/delta)) / (1 - lambda2)), natural log.
long min_consensus_rounds(int n, double j_lipschitz, double delta, double lam2);

/// One consensus message: mixed vector plus its scalar companion (used for
/// ratio consensus on the minibatch normalizer).
struct NodeMessage {
    Vec vec;
    double scal = 0.0;
};

/// r synchronous rounds of Q-weighted mixing applied to both components.
std::vector<NodeMessage> consensus_phase(std::vector<NodeMessage> msgs,
                                         const CommMatrix& q, long rounds);

/// z_i(t+1) = vec / scal; the ratio-consensus estimate of the master's dual.
Vec node_dual_update(const NodeMessage& mixed);

}  // namespace ambdg
