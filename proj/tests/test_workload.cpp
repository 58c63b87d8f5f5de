#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ambdg/linreg.hpp"
#include "ambdg/optim.hpp"

using namespace ambdg;

TEST_CASE("ground truth generation is seeded and standard normal") {
    Rng a(99), b(99), c(100);
    GroundTruth g1 = gen_ground_truth(4, 1e-3, a);
    GroundTruth g2 = gen_ground_truth(4, 1e-3, b);
    GroundTruth g3 = gen_ground_truth(4, 1e-3, c);
    CHECK(g1.wstar == g2.wstar);
    CHECK(g1.wstar != g3.wstar);

    // CLT bounds at 3 sigma for d = 10^4: mean within 0.04 (4 sigma of 1/sqrt(d)),
    // variance within 0.06 of 1
    Rng big(7);
    GroundTruth g = gen_ground_truth(10000, 1e-3, big);
    const double mean = g.wstar.mean();
    const double var = (g.wstar.array() - mean).square().mean();
    CHECK(std::abs(mean) <= 0.04);
    CHECK(std::abs(var - 1.0) <= 0.06);
}

TEST_CASE("sample_point noise behavior") {
    Rng rng(3);
    GroundTruth gt = gen_ground_truth(6, 0.0, rng);
    DataPoint p = sample_point(gt, rng);
    CHECK(p.y == p.zeta.dot(gt.wstar));  // noiseless

    Rng r1(4), r2(4);
    GroundTruth gt2 = gen_ground_truth(6, 1e-3, r1);
    GroundTruth gt2b = gen_ground_truth(6, 1e-3, r2);
    CHECK(sample_point(gt2, r1).y == sample_point(gt2b, r2).y);  // determinism

    // residual variance within 20% of 1e-3 over 1e5 draws
    Rng r3(5);
    GroundTruth gt3 = gen_ground_truth(3, 1e-3, r3);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        DataPoint q = sample_point(gt3, r3);
        const double res = q.y - q.zeta.dot(gt3.wstar);
        acc += res * res;
    }
    const double var = acc / n;
    CHECK(var >= 0.8e-3);
    CHECK(var <= 1.2e-3);
}

TEST_CASE("loss and grad hand examples") {
    GroundTruth gt;
    gt.wstar = Vec::Zero(2);
    DataPoint p;
    p.zeta = Vec(2);
    p.zeta << 1.0, 0.0;
    p.y = 2.0;
    Vec w = Vec::Zero(2);
    CHECK(loss(w, p) == 4.0);
    Vec g = grad(w, p);
    CHECK(g[0] == -2.0);
    CHECK(g[1] == 0.0);

    // zero residual at the optimum of a noiseless sample
    Rng rng(8);
    GroundTruth gt2 = gen_ground_truth(5, 0.0, rng);
    DataPoint q = sample_point(gt2, rng);
    CHECK(loss(gt2.wstar, q) == doctest::Approx(0.0).epsilon(1e-18));
    CHECK(grad(gt2.wstar, q).lpNorm<Eigen::Infinity>() <= 1e-12);

    CHECK_THROWS_AS(loss(Vec::Zero(3), p), ConfigError);
    CHECK_THROWS_AS(grad(Vec::Zero(3), p), ConfigError);
}

TEST_CASE("loss matches an independent re-evaluation") {
    Rng rng(21);
    GroundTruth gt = gen_ground_truth(8, 1e-3, rng);
    for (int rep = 0; rep < 20; ++rep) {
        DataPoint p = sample_point(gt, rng);
        Vec w(8);
        for (int i = 0; i < 8; ++i) w[i] = rng.normal();
        double dot = 0.0;
        for (int i = 0; i < 8; ++i) dot += p.zeta[i] * w[i];
        const double expect = (dot - p.y) * (dot - p.y);
        CHECK(loss(w, p) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("grad agrees with central finite differences of loss/2") {
    Rng rng(31);
    for (Eigen::Index d : {2, 8, 64}) {
        GroundTruth gt = gen_ground_truth(d, 1e-3, rng);
        for (int rep = 0; rep < 34; ++rep) {
            DataPoint p = sample_point(gt, rng);
            Vec w(d);
            for (Eigen::Index i = 0; i < d; ++i) w[i] = rng.normal();
            Vec g = grad(w, p);
            const double h = 1e-6;
            for (Eigen::Index i = 0; i < d; ++i) {
                Vec wp = w, wm = w;
                wp[i] += h;
                wm[i] -= h;
                const double fd = (loss(wp, p) - loss(wm, p)) / (4.0 * h);  // grad of loss/2
                CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("loss is convex along any line") {
    Rng rng(41);
    GroundTruth gt = gen_ground_truth(6, 1e-3, rng);
    for (int rep = 0; rep < 100; ++rep) {
        DataPoint p = sample_point(gt, rng);
        Vec w1(6), w2(6);
        for (int i = 0; i < 6; ++i) {
            w1[i] = rng.normal();
            w2[i] = rng.normal();
        }
        const double lam = rng.uniform();
        const Vec mid = lam * w1 + (1.0 - lam) * w2;
        CHECK(loss(mid, p) <= lam * loss(w1, p) + (1.0 - lam) * loss(w2, p) + 1e-9);
    }
}

TEST_CASE("error_rate examples") {
    Rng rng(55);
    GroundTruth gt = gen_ground_truth(10, 1e-3, rng);
    CHECK(error_rate(Vec::Zero(10), gt) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(error_rate(gt.wstar, gt) == 0.0);

    GroundTruth degenerate;
    degenerate.wstar = Vec::Zero(3);
    CHECK_THROWS_AS(error_rate(Vec::Zero(3), degenerate), std::domain_error);
}

TEST_CASE("error_rate matches the sampled matrix form at small d") {
    // Err = ||A(w - w*)||^2 / ||A w*||^2 with N i.i.d. normal rows of A
    // concentrates to the norm ratio
    Rng rng(66);
    const Eigen::Index d = 50;
    const int n_rows = 200000;
    GroundTruth gt = gen_ground_truth(d, 1e-3, rng);
    Vec w(d);
    for (Eigen::Index i = 0; i < d; ++i) w[i] = rng.normal();

    const Vec diff = w - gt.wstar;
    double num = 0.0, den = 0.0;
    Vec row(d);
    for (int r = 0; r < n_rows; ++r) {
        for (Eigen::Index i = 0; i < d; ++i) row[i] = rng.normal();
        const double a = row.dot(diff);
        const double b = row.dot(gt.wstar);
        num += a * a;
        den += b * b;
    }
    const double sampled = num / den;
    CHECK(error_rate(w, gt) == doctest::Approx(sampled).epsilon(0.02));
}

TEST_CASE("error_rate is invariant under simultaneous rotation") {
    Rng rng(77);
    const Eigen::Index d = 8;
    GroundTruth gt = gen_ground_truth(d, 1e-3, rng);
    Vec w(d);
    for (Eigen::Index i = 0; i < d; ++i) w[i] = rng.normal();
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::MatrixXd m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        Eigen::MatrixXd qmat = qr.householderQ();
        GroundTruth rot;
        rot.wstar = qmat * gt.wstar;
        rot.noise_var = gt.noise_var;
        CHECK(error_rate(Vec(qmat * w), rot) == doctest::Approx(error_rate(w, gt)).epsilon(1e-9));
    }
}

TEST_CASE("noiseless full-batch dual averaging converges at d=100") {
    // fixed finite sample, sigma^2 = 0: error rate falls below 1e-3
    // monotonically within 500 epochs
    Rng rng(88);
    const Eigen::Index d = 100;
    const int n_samples = 200;
    GroundTruth gt = gen_ground_truth(d, 0.0, rng);
    std::vector<DataPoint> data;
    data.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) data.push_back(sample_point(gt, rng));

    auto s = make_dual_state(d, 0, 4.0, 1e8);
    Vec w = Vec::Zero(d);
    double prev = error_rate(w, gt);
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
    bool reached = false;
    for (long t = 1; t <= 500; ++t) {
        Vec g = Vec::Zero(d);
        for (const DataPoint& p : data) g += grad(w, p);
        g /= static_cast<double>(n_samples);
        dual_update_inplace(s, g);
        w = primal_update(s.z, step_size(s, t + 1));
        const double err = error_rate(w, gt);
        CHECK(err <= prev + 1e-12);
        prev = err;
        if (err < 1e-3) {
            reached = true;
            break;
        }
    }
    CHECK(reached);
}
