// SPDX-License-Identifier: Apache-2.0
//
// mmhetnet <command> [options]
//
//   associate  association probabilities and loads over a bias grid
//   coverage   rate coverage over rate thresholds
//   optimize   linear search for the coverage-maximising bias
//   simulate   Monte Carlo estimates
//   sweep      one-parameter sweep (bias, delta, lambda_s, beamwidths)
//   validate   analysis vs Monte Carlo report; exit 1 on any failure
#include <iostream>

#include <CLI11.hpp>

#include <mmhetnet/cli.hpp>

int main(int argc, char** argv) {
    using namespace mmhetnet;

    CLI::App app{"Rate coverage and bias optimisation for two-tier mmWave HetNets"};
    app.require_subcommand(1);

    cli::RunManifest manifest;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", manifest.config_path, "INI configuration file (default: built-in reference set)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", manifest.output_path, "CSV output path, '-' for stdout");
        sub->add_option("--delta", manifest.deltas, "rate threshold(s) in bit/s");
        sub->add_flag("--exact-exclusion", manifest.exact_exclusion,
                      "exclude interferers ruled out by association in S4/S5");
        sub->add_option("--threads", manifest.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid-min", manifest.grid_min, "smallest bias A_s");
        sub->add_option("--grid-max", manifest.grid_max, "largest bias A_s");
        sub->add_option("--grid-points", manifest.grid_points, "log-spaced grid size");
    };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--seed", manifest.seed, "Monte Carlo seed");
        sub->add_option("--trials", manifest.trials, "Monte Carlo realizations");
    };

    auto* associate = app.add_subcommand("associate", "association probabilities and loads vs bias");
    add_common(associate);
    add_grid(associate);
    auto* coverage = app.add_subcommand("coverage", "rate coverage vs rate threshold");
    add_common(coverage);
    auto* optimize = app.add_subcommand("optimize", "optimal bias by linear search");
    add_common(optimize);
    add_grid(optimize);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
    add_common(simulate);
    add_mc(simulate);
    auto* sweep = app.add_subcommand("sweep", "one-parameter sweep");
    add_common(sweep);
    sweep->add_option("--axis", manifest.axis, "bias | delta | lambda_s | beamwidths")->required();
    sweep->add_option("--values", manifest.values, "axis values")->required();
    auto* validate = app.add_subcommand("validate", "analysis vs Monte Carlo");
    add_common(validate);
    add_mc(validate);

    CLI11_PARSE(app, argc, argv);

    const auto* chosen = app.get_subcommands().front();
    manifest.command = *cli::parse_command(chosen->get_name());
    try {
        return cli::run(manifest);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return cli::exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_failed;
    }
}
