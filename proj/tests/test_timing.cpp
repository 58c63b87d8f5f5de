#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ambdg/timing.hpp"

using namespace ambdg;

TEST_CASE("shifted exponential sampling") {
    ShiftedExp m(2.0 / 3.0, 1.0);
    CHECK(m.mean() == doctest::Approx(2.5).epsilon(1e-15));

    Rng rng(1);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double t = sample_batch_time(m, rng);
        CHECK(t >= m.xi);  // support lower bound
        acc += t;
    }
    CHECK(acc / n == doctest::Approx(2.5).epsilon(0.01));  // law of large numbers

    Rng a(9), b(9);
    CHECK(sample_batch_time(m, a) == sample_batch_time(m, b));

    CHECK_THROWS_AS(ShiftedExp(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(ShiftedExp(1.0, -0.1), ConfigError);
}

TEST_CASE("minibatch_from_time examples") {
    CHECK(minibatch_from_time(2.5, 60, 2.5) == 60);
    CHECK(minibatch_from_time(2.5, 60, 1.0) == 150);  // k >= b is allowed
    CHECK_THROWS_AS(minibatch_from_time(0.0, 60, 1.0), ConfigError);
    CHECK_THROWS_AS(minibatch_from_time(2.5, 0, 1.0), ConfigError);
}

TEST_CASE("expected total minibatch meets the n*b lower bound") {
    // lambda=2/3, xi=1, T_p=2.5, b=60, n=10: E[b(t)] >= n*b = 600
    ShiftedExp m(2.0 / 3.0, 1.0);
    Rng rng(12);
    const int epochs = 10000, n = 10;
    double total = 0.0;
    for (int t = 0; t < epochs; ++t)
        for (int i = 0; i < n; ++i)
            total += static_cast<double>(minibatch_from_time(2.5, 60, sample_batch_time(m, rng)));
    CHECK(total / epochs >= 600.0);
}

TEST_CASE("minibatch_from_time is nonincreasing in T_i and near-linear in T_p") {
    Rng rng(13);
    for (int rep = 0; rep < 200; ++rep) {
        const double t1 = 1.0 + 4.0 * rng.uniform();
        const double t2 = t1 + 3.0 * rng.uniform();
        CHECK(minibatch_from_time(2.5, 60, t1) >= minibatch_from_time(2.5, 60, t2));

        // linear up to the floor: b(k*T_p) is within one unit of k*b(T_p)
        const double tp = 0.5 + 3.0 * rng.uniform();
        const long base = minibatch_from_time(tp, 60, t1);
        for (long k = 2; k <= 4; ++k) {
            const long scaled = minibatch_from_time(static_cast<double>(k) * tp, 60, t1);
            CHECK(scaled >= k * base);
            CHECK(scaled <= k * base + k);
        }
    }
}

TEST_CASE("per-worker sequences are independent (chi-square smoke test)") {
    // two workers' minibatch sequences, median split, 2x2 contingency;
    // seeded so the statistic stays under the 5% critical value 3.841
    ShiftedExp m(2.0 / 3.0, 1.0);
    const int epochs = 2000;
    std::vector<long> w1, w2;
    Rng r1(101), r2(202);
    for (int t = 0; t < epochs; ++t) {
        w1.push_back(minibatch_from_time(2.5, 60, sample_batch_time(m, r1)));
        w2.push_back(minibatch_from_time(2.5, 60, sample_batch_time(m, r2)));
    }
    auto median = [](std::vector<long> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    const long m1 = median(w1), m2 = median(w2);
    double cell[2][2] = {{0, 0}, {0, 0}};
    for (int t = 0; t < epochs; ++t) cell[w1[t] > m1][w2[t] > m2] += 1.0;
    const double n = epochs;
    double chi2 = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double row = cell[a][0] + cell[a][1];
            const double col = cell[0][b] + cell[1][b];
            const double expect = row * col / n;
            chi2 += (cell[a][b] - expect) * (cell[a][b] - expect) / expect;
        }
    CHECK(chi2 < 3.841);
}
