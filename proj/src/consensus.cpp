#include "ambdg/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ambdg/rng.hpp"

namespace ambdg {

WorkerGraph parse_graph_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    WorkerGraph g;
    if (!(in >> g.n) || g.n < 1)
        throw ConfigError(origin + ": graph file must start with a positive node count");
    int a, b;
    while (in >> a >> b) {
        if (a < 0 || b < 0 || a >= g.n || b >= g.n)
            throw ConfigError(origin + ": edge endpoint out of range");
        if (a == b) throw ConfigError(origin + ": self loops are not allowed");
        g.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

WorkerGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph_text(ss.str(), path);
}

bool is_connected(const WorkerGraph& g) {
    if (g.n <= 1) return true;
    std::vector<std::vector<int>> adj(g.n);
    for (auto [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.n;
}

WorkerGraph ring_graph(int n) {
    WorkerGraph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    if (n > 2) g.edges.emplace_back(0, n - 1);
    return g;
}

WorkerGraph complete_graph(int n) {
    WorkerGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

WorkerGraph path_graph(int n) {
    WorkerGraph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

CommMatrix build_comm_matrix(const WorkerGraph& g) {
    if (!is_connected(g)) throw ConfigError("build_comm_matrix: graph is not connected");
    const int n = g.n;
    std::vector<int> deg(n, 0);
    for (auto [a, b] : g.edges) {
        ++deg[a];
        ++deg[b];
    }
    CommMatrix q = CommMatrix::Zero(n, n);
    for (auto [a, b] : g.edges) {
        const double w = 1.0 / (1.0 + std::max(deg[a], deg[b]));
        q(a, b) = w;
        q(b, a) = w;
    }
    for (int i = 0; i < n; ++i) q(i, i) = 1.0 - q.row(i).sum();
    // lazy transform guarantees PSD
    q = 0.5 * (CommMatrix::Identity(n, n) + q);
    return q;
}

void validate_comm_matrix(const CommMatrix& q, const WorkerGraph& g) {
    const int n = g.n;
    if (q.rows() != n || q.cols() != n)
        throw ConfigError("comm matrix: wrong shape");
    for (int i = 0; i < n; ++i) {
        if (std::abs(q.row(i).sum() - 1.0) > 1e-12)
            throw ConfigError("comm matrix: row " + std::to_string(i) + " does not sum to 1");
        if (std::abs(q.col(i).sum() - 1.0) > 1e-12)
            throw ConfigError("comm matrix: column " + std::to_string(i) + " does not sum to 1");
    }
    if (!q.isApprox(q.transpose(), 1e-12))
        throw ConfigError("comm matrix: not symmetric");
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [a, b] : g.edges) adj[a][b] = adj[b][a] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !adj[i][j] && q(i, j) > 0.0)
                throw ConfigError("comm matrix: positive weight on a non-edge");
    Eigen::SelfAdjointEigenSolver<CommMatrix> es(q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ConfigError("comm matrix: not positive semi-definite");
}

double lambda2(const CommMatrix& q) {
    const Eigen::Index n = q.rows();
    if (n != q.cols()) throw ConfigError("lambda2: matrix must be square");
    if (n == 1) return 0.0;

    const double tol = 1e-10;
    const long max_iters = 200000;

    Rng rng(0x6C616D32ULL);
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();
    auto deflate = [&](Vec& v) { v.array() -= v.mean(); };
    deflate(x);
    if (x.norm() == 0.0) x[0] = 1.0, x[n - 1] = -1.0;
    x.normalize();

    double lam = 0.0;
    for (long it = 0; it < max_iters; ++it) {
        Vec y = q * x;
        deflate(y);
        lam = x.dot(y);
        const double res = (y - lam * x).lpNorm<Eigen::Infinity>();
        const double yn = y.norm();
        if (yn == 0.0) return 0.0;  // deflated operator is null
        y /= yn;
        x = std::move(y);
        if (res <= tol) return lam;
    }
    throw NumericError("lambda2: power iteration did not reach tolerance " +
                       std::to_string(tol) + " within " + std::to_string(max_iters) +
                       " iterations (last estimate " + std::to_string(lam) + ")");
}

long min_consensus_rounds(int n, double j_lipschitz, double delta, double lam2) {
    if (n < 1) throw ConfigError("min_consensus_rounds: n must be >= 1");
    if (delta <= 0.0) throw ConfigError("min_consensus_rounds: delta must be > 0");
    if (j_lipschitz < 0.0) throw ConfigError("min_consensus_rounds: J must be >= 0");
    if (lam2 >= 1.0 || lam2 < 0.0)
        throw ConfigError("min_consensus_rounds: lambda2 must lie in [0, 1) "
                          "(disconnected or periodic chain?)");
    const double num = std::log(2.0 * std::sqrt(static_cast<double>(n)) *
                                (1.0 + 2.0 * j_lipschitz / delta));
    return static_cast<long>(std::ceil(num / (1.0 - lam2)));
}

std::vector<NodeMessage> consensus_phase(std::vector<NodeMessage> msgs,
                                         const CommMatrix& q, long rounds) {
    const Eigen::Index n = q.rows();
    if (static_cast<Eigen::Index>(msgs.size()) != n)
        throw ConfigError("consensus_phase: message count does not match matrix size");
    if (rounds < 1) throw ConfigError("consensus_phase: rounds must be >= 1");
    for (const auto& m : msgs)
        if (m.vec.size() != msgs.front().vec.size())
            throw ConfigError("consensus_phase: inconsistent message dimensions");

    std::vector<NodeMessage> next(msgs.size());
    for (long k = 0; k < rounds; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Vec acc = Vec::Zero(msgs.front().vec.size());
            double s = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double w = q(i, j);
                if (w == 0.0) continue;
                acc.noalias() += w * msgs[j].vec;
                s += w * msgs[j].scal;
            }
            next[i].vec = std::move(acc);
            next[i].scal = s;
        }
        msgs.swap(next);
    }
    return msgs;
}

Vec node_dual_update(const NodeMessage& mixed) {
    if (!(mixed.scal > 0.0))
        throw NumericError("node_dual_update: nonpositive scalar companion (" +
                           std::to_string(mixed.scal) + ")");
    return mixed.vec / mixed.scal;
}

}  // namespace ambdg
