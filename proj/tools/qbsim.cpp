// qbsim: configuration-driven runner for the two-level quantum Brownian
// simulations (presets fig1, fig2a, fig2b, fig3, plus custom parameter sets).

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qbm/app/config.hpp"
#include "qbm/app/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"stochastic Schroedinger-Langevin / Fokker-Planck experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool svg = false;

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "config file path")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--seed", seed, "master seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--threads", threads, "worker threads (default: hardware parallelism)");
    run->add_flag("--svg", svg, "also emit SVG line plots");

    auto* validate = app.add_subcommand("validate", "check a config file without running");
    validate->add_option("config", config_path, "config file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        qbm::app::ExperimentConfig cfg = qbm::app::parse_config_file(config_path);
        if (app.got_subcommand(validate)) {
            const auto diags = qbm::app::validate(cfg);
            for (const auto& d : diags) std::cout << "diagnostic: " << d.message << "\n";
            if (diags.empty()) std::cout << "config ok\n";
            return diags.empty() ? 0 : 2;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.master_seed = seed;
        if (threads != 0) cfg.threads = threads;
        if (svg) cfg.svg = true;

        const auto outcome = qbm::app::run_experiment(cfg);
        std::cout << outcome.report;
        return outcome.exit_code;
    } catch (const qbm::app::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
