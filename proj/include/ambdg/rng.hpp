#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace ambdg {

// SplitMix64 finalizer; used both as a generator step and as a seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic substream addressing: every (replication, worker, epoch, purpose)
// tuple maps to one 64-bit seed, independent of event interleaving.
inline std::uint64_t mix_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = root;
    for (std::uint64_t t : tags) {
        std::uint64_t tmp = t;
        s ^= splitmix64(tmp);
        (void)splitmix64(s);
        s = splitmix64(s);
    }
    return s;
}

enum class StreamPurpose : std::uint64_t {
    GroundTruth = 0x67726F756E64ULL,
    Timing      = 0x74696D696E67ULL,
    Data        = 0x64617461ULL,
    Test        = 0x74657374ULL,
};

inline std::uint64_t replication_root(std::uint64_t root_seed, std::uint64_t replication) {
    std::uint64_t t = 0x5245504CULL + replication;  // per-replication constant
    return root_seed ^ splitmix64(t);
}

inline std::uint64_t stream_seed(std::uint64_t rep_root, StreamPurpose p,
                                 std::uint64_t worker = 0, std::uint64_t epoch = 0) {
    return mix_seed(rep_root, {static_cast<std::uint64_t>(p), worker, epoch});
}

// Seeded stream with stdlib-independent samplers so traces are reproducible
// across platforms, not just across runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() {
        return (next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Marsaglia polar, pairs cached
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * m;
        has_cached_ = true;
        return u * m;
    }

    // Exp(rate) via inverse CDF
    double exponential(double rate) {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return -std::log(u) / rate;
    }

private:
    std::mt19937_64 gen_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace ambdg
