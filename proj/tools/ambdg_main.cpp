#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ambdg/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Anytime-minibatch simulator with delayed gradients"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int replications = 0;
    bool seed_given = false;

    auto* run = app.add_subcommand("run", "run an experiment and write trace.csv + summary.json");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_option("--seed", seed, "override root_seed")->each([&](const std::string&) {
        seed_given = true;
    });
    run->add_option("--replications", replications, "override replication count");

    std::vector<std::string> trace_files;
    std::string targets_arg = "0.5,0.35,0.2";
    auto* cmp = app.add_subcommand("compare", "time-to-error and speedups across trace files");
    cmp->add_option("traces", trace_files, "trace CSV files")->required()->expected(-2);
    cmp->add_option("--targets", targets_arg, "comma-separated error targets");

    std::string bounds_config;
    auto* bounds = app.add_subcommand("bounds", "evaluate the regret/gap bound expressions");
    bounds->add_option("--config", bounds_config, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ambdg::ExperimentConfig cfg = ambdg::load_config(config_path);
            if (seed_given) cfg.root_seed = seed;
            if (replications > 0) cfg.replications = replications;
            ambdg::validate_config(cfg);
            ambdg::ExperimentResult result = ambdg::run_experiment(cfg);
            ambdg::write_artifacts(result, out_dir);
            std::cout << result.summary.dump(2) << std::endl;
        } else if (cmp->parsed()) {
            std::vector<double> targets;
            std::string tok;
            std::istringstream ts(targets_arg);
            while (std::getline(ts, tok, ','))
                if (!tok.empty()) targets.push_back(std::stod(tok));
            if (targets.empty()) throw ambdg::ConfigError("--targets: no targets given");
            std::cout << ambdg::compare_traces(trace_files, targets).dump(2) << std::endl;
        } else if (bounds->parsed()) {
            ambdg::ExperimentConfig cfg = ambdg::load_config(bounds_config);
            std::cout << ambdg::evaluate_bounds(cfg).dump(2) << std::endl;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
