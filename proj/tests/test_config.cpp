#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "ambdg/config.hpp"
#include "ambdg/experiment.hpp"

using namespace ambdg;

namespace {

const char* kReferenceConfig =
    "scheme = ambdg\n"
    "n = 10\n"
    "d = 10000\n"
    "T_p = 2.5\n"
    "T_c = 10\n"
    "b = 60\n"
    "lambda = 0.6666666666666666\n"
    "xi = 1.0\n"
    "noise_var = 1e-3\n"
    "step_lipschitz = 16\n"
    "step_bbar = 600\n"
    "horizon_seconds = 120\n"
    "replications = 10\n"
    "root_seed = 1\n";

}  // namespace

TEST_CASE("reference linear-regression configuration is accepted") {
    ExperimentConfig cfg = parse_config_text(kReferenceConfig, "<mem>");
    CHECK(cfg.scheme == Scheme::AmbDg);
    CHECK(cfg.n == 10);
    CHECK(cfg.d == 10000);
    CHECK(cfg.t_c == 10.0);
    CHECK(cfg.scheme_tau() == 4);
    CHECK(cfg.replications == 10);
}

TEST_CASE("T_c must be an integer multiple of T_p for ambdg") {
    std::string text = kReferenceConfig;
    text += "T_p = 3\n";  // later key wins; T_c/T_p = 10/3
    CHECK_THROWS_WITH_AS(parse_config_text(text, "<mem>"),
                         doctest::Contains("integer multiple"), ConfigError);
}

TEST_CASE("missing root_seed is rejected with a named diagnostic") {
    std::string text =
        "scheme = amb\nT_p = 1\nT_c = 0\nhorizon_updates = 5\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "<mem>"),
                         doctest::Contains("root_seed"), ConfigError);
}

TEST_CASE("violations carry field names and line numbers") {
    CHECK_THROWS_WITH_AS(parse_config_text("scheme = ambdg\nn = zero\nroot_seed = 1\n", "<mem>"),
                         doctest::Contains("'n'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("nonsense_key = 1\n", "<mem>"),
                         doctest::Contains("nonsense_key"), ConfigError);
    try {
        parse_config_text("scheme = ambdg\nn = zero\nroot_seed = 1\n", "<mem>");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("scheme sections apply only to the matching scheme") {
    std::string text = kReferenceConfig;
    text +=
        "[kbatch_async]\n"
        "K = 10\n"
        "b_tilde = 600\n";
    ExperimentConfig cfg = parse_config_text(text, "<mem>");
    CHECK(cfg.kbatch_k == 0);  // ambdg selected; section ignored

    std::string text2 = text;
    text2.replace(text2.find("scheme = ambdg"), 14, "scheme = kbatch_async");
    ExperimentConfig cfg2 = parse_config_text(text2, "<mem>");
    CHECK(cfg2.kbatch_k == 10);
    CHECK(cfg2.b_tilde == 600);
}

TEST_CASE("kbatch validation") {
    std::string text = kReferenceConfig;
    text.replace(text.find("scheme = ambdg"), 14, "scheme = kbatch_async");
    CHECK_THROWS_WITH_AS(parse_config_text(text, "<mem>"), doctest::Contains("K"), ConfigError);
    text += "[kbatch_async]\nK = 7\nb_tilde = 600\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "<mem>"),
                         doctest::Contains("divide"), ConfigError);
}

TEST_CASE("horizon must be exactly one of updates/seconds") {
    std::string both = kReferenceConfig;
    both += "horizon_updates = 10\n";
    CHECK_THROWS_AS(parse_config_text(both, "<mem>"), ConfigError);
    std::string none = kReferenceConfig;
    none.replace(none.find("horizon_seconds = 120"), 21, "horizon_seconds = 0  ");
    CHECK_THROWS_AS(parse_config_text(none, "<mem>"), ConfigError);
}

TEST_CASE("targets parse and validate") {
    std::string text = kReferenceConfig;
    text += "targets = 0.5, 0.35 ,0.2\n";
    ExperimentConfig cfg = parse_config_text(text, "<mem>");
    REQUIRE(cfg.targets.size() == 3);
    CHECK(cfg.targets[1] == 0.35);
    text += "targets = -1\n";
    CHECK_THROWS_AS(parse_config_text(text, "<mem>"), ConfigError);
}

TEST_CASE("config round trip through a file") {
    const std::string path = "test_config_roundtrip.cfg";
    {
        std::ofstream out(path);
        out << kReferenceConfig;
    }
    ExperimentConfig cfg = load_config(path);
    CHECK(cfg.root_seed == 1);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config("does_not_exist.cfg"), ConfigError);
}

TEST_CASE("bounds evaluation from config") {
    std::string text =
        "scheme = ambdg\nn = 10\nd = 10\nT_p = 2.5\nT_c = 10\nb = 60\n"
        "step_bbar = 600\nhorizon_updates = 100\nroot_seed = 1\n"
        "[bounds]\nJ = 1\nL = 2\nC = 1\nsigma2 = 1\nb_hat = 550\n";
    ExperimentConfig cfg = parse_config_text(text, "<mem>");
    Json out = evaluate_bounds(cfg);
    CHECK(out["tau"] == 4);
    CHECK(double(out["regret_bound"]) ==
          doctest::Approx(201791919.4116381184346).epsilon(1e-12));
    CHECK(double(out["gap_bound"]) == doctest::Approx(3363.198656860635307243).epsilon(1e-12));
    CHECK(double(out["regret_bound_decentralized"]) == double(out["regret_bound"]));

    ExperimentConfig no_bounds = parse_config_text(kReferenceConfig, "<mem>");
    CHECK_THROWS_AS(evaluate_bounds(no_bounds), ConfigError);
}
