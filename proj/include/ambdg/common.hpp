#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ambdg {

using Vec = Eigen::VectorXd;

/// Invalid configuration or mismatched dimensions; fatal for the run.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical degeneracy (non-convergence, nonpositive normalizer, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A simulator invariant was violated; aborts the replication.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require_same_dim(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size())
        throw ConfigError(std::string(where) + ": dimension mismatch (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

}  // namespace ambdg
