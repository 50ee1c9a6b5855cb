// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <mmhetnet/cli.hpp>
#include <mmhetnet/config.hpp>

using namespace mmhetnet;

namespace {

const std::string bundled = std::string(MMHETNET_SOURCE_DIR) + "/configs/reference.ini";

std::string replace_line(std::string text, const std::string& prefix, const std::string& replacement) {
    const auto at = text.find(prefix);
    if (at == std::string::npos) throw std::logic_error("no line " + prefix);
    const auto end = text.find('\n', at);
    text.replace(at, end - at, replacement);
    return text;
}

std::string error_of(const std::string& text) {
    try {
        (void)config::parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::pair<int, std::string> run_to_string(const cli::RunManifest& m) {
    std::ostringstream out;
    const int status = cli::run(m, out);
    return {status, out.str()};
}

} // namespace

TEST(Config, BundledFileIsReferenceSet) {
    const auto cfg = config::load_config(bundled);
    EXPECT_EQ(cfg, reference_config());
    EXPECT_EQ(cfg.macro.power, 1e4);
    EXPECT_EQ(cfg.micro.power, 1e2);
    EXPECT_EQ(cfg.alpha, 2.2);
    EXPECT_EQ(cfg.fading.m, 1);
    EXPECT_EQ(cfg.noise, 1.0);
}

TEST(Config, RangeErrorsNameTheConstraint) {
    const auto text = config::format_config(reference_config());
    const auto micro_at = text.find("[micro]");
    std::string omega = text;
    omega.replace(omega.find("omega = ", micro_at), std::string("omega = 0.5").size(), "omega = 1.5");
    EXPECT_NE(error_of(omega).find("omega_s ∈ [0,1]"), std::string::npos) << error_of(omega);
    EXPECT_NE(error_of(omega).find("micro.omega"), std::string::npos);

    const auto bias = replace_line(text, "bias =", "bias = 0.5");
    EXPECT_NE(error_of(bias).find("A_s ≥ 1"), std::string::npos) << error_of(bias);
}

TEST(Config, MissingAndMalformedKeys) {
    const auto text = config::format_config(reference_config());
    const auto missing = replace_line(text, "alpha =", "");
    EXPECT_NE(error_of(missing).find("missing key 'alpha'"), std::string::npos) << error_of(missing);

    const auto garbage = replace_line(text, "noise =", "noise = 1.0x");
    EXPECT_NE(error_of(garbage).find("'noise'"), std::string::npos) << error_of(garbage);

    const auto unknown = replace_line(text, "noise =", "noise = 1\nsnr = 3");
    EXPECT_NE(error_of(unknown).find("unknown key 'snr'"), std::string::npos);

    EXPECT_NE(error_of(text + "[pico]\nmu = 3\n").find("unknown section"), std::string::npos);
    EXPECT_NE(error_of("[macro\n").find("unparseable"), std::string::npos);
    EXPECT_THROW(config::load_config("/nonexistent/file.ini"), ConfigError);
    EXPECT_EQ(error_of(text), "");
}

TEST(Config, NonIntegerFadingShapeRejected) {
    const auto text = replace_line(config::format_config(reference_config()), "nakagami_m =", "nakagami_m = 2.5");
    EXPECT_NE(error_of(text).find("nakagami_m"), std::string::npos);
}

TEST(Config, RoundTripOnRandomConfigs) {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    for (int trial = 0; trial < 200; ++trial) {
        NetworkConfig cfg = reference_config();
        for (TierParams* t : {&cfg.macro, &cfg.micro}) {
            t->omega = u(rng);
            t->lambda_los = t->omega > 0.0 ? log_uniform(1e-7, 1e-2) : 0.0;
            t->mu = log_uniform(1.0, 1e4);
            t->power = log_uniform(1e-2, 1e6);
            t->g_min = log_uniform(1e-2, 10.0);
            t->g_max = t->g_min * log_uniform(1.0, 1e4);
            t->beamwidth = 2.0 * std::numbers::pi * (1.0 - u(rng));
            t->spectrum = log_uniform(1e6, 1e10);
        }
        cfg.lambda_u = log_uniform(1e-4, 10.0);
        cfg.bias = log_uniform(1.0, 1e8);
        cfg.alpha = 2.0 + log_uniform(1e-3, 4.0);
        cfg.noise = log_uniform(1e-12, 1e3);
        cfg.fading.m = 1 + static_cast<int>(u(rng) * 8.0) % 8;
        const auto text = config::format_config(cfg);
        const auto back = config::parse_config_text(text);
        ASSERT_EQ(back, cfg) << text;
        ASSERT_EQ(config::format_config(back), text);
    }
}

TEST(Csv, Escaping) {
    EXPECT_EQ(csv::Writer::escape("plain"), "plain");
    EXPECT_EQ(csv::Writer::escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv::Writer::escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv::Writer::num(0.1), "0.1");
    EXPECT_EQ(std::stod(csv::Writer::num(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Run, SweepHeaderAndRows) {
    cli::RunManifest m;
    m.command = cli::Command::sweep;
    m.config_path = bundled;
    m.axis = "lambda_s";
    m.values = {1e-4, 1e-3};
    const auto [status, text] = run_to_string(m);
    EXPECT_EQ(status, cli::exit_ok);
    const auto rows = read_csv(text);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"axis_value", "B_m", "B_s", "P_tm", "P_ts", "L_m", "L_s", "tau_m",
                                                 "tau_s", "P2", "P3", "P4", "P5", "P_c", "error"}));
    EXPECT_EQ(rows[1].size(), rows[0].size());
    EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Run, FailedRowGivesNonzeroExit) {
    cli::RunManifest m;
    m.command = cli::Command::sweep;
    m.axis = "beamwidths";
    m.values = {0.1, 9.0};
    const auto [status, text] = run_to_string(m);
    EXPECT_EQ(status, cli::exit_failed);
    const auto rows = read_csv(text);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(rows[1].back().empty());
    EXPECT_FALSE(rows[2].back().empty());
}

TEST(Run, ManifestValidation) {
    cli::RunManifest m;
    m.command = cli::Command::simulate;
    m.trials = 0;
    EXPECT_THROW(cli::run(m, std::cout), std::invalid_argument);
    m = {};
    m.command = cli::Command::sweep;
    m.axis = "alpha";
    m.values = {1.0};
    EXPECT_THROW(cli::run(m, std::cout), std::invalid_argument);
    m = {};
    m.deltas = {-1.0};
    EXPECT_THROW(cli::run(m, std::cout), std::invalid_argument);
}

TEST(Run, OptimizeMarksExactlyOneOptimum) {
    cli::RunManifest m;
    m.command = cli::Command::optimize;
    m.grid_points = 9;
    const auto [status, text] = run_to_string(m);
    EXPECT_EQ(status, cli::exit_ok);
    const auto rows = read_csv(text);
    ASSERT_EQ(rows.size(), 10u);
    ASSERT_EQ(rows[0][8], "optimum");
    int marked = 0;
    double best = -1.0;
    double marked_pc = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double pc = std::stod(rows[i][7]);
        best = std::max(best, pc);
        if (rows[i][8] == "1") {
            ++marked;
            marked_pc = pc;
        }
    }
    EXPECT_EQ(marked, 1);
    EXPECT_EQ(marked_pc, best);
}

TEST(Run, AssociateColumns) {
    cli::RunManifest m;
    m.command = cli::Command::associate;
    m.grid_points = 5;
    const auto rows = read_csv(run_to_string(m).second);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0][0], "A_s");
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_NEAR(std::stod(rows[i][4]) + std::stod(rows[i][5]) + std::stod(rows[i][8]), 1.0, 1e-9);
}

TEST(Run, SimulationIsByteReproducible) {
    cli::RunManifest m;
    m.command = cli::Command::simulate;
    m.trials = 3000;
    m.seed = 11;
    m.deltas = {1e6, 1e7};
    const auto first = run_to_string(m);
    m.threads = 1;
    const auto second = run_to_string(m);
    EXPECT_EQ(first.first, cli::exit_ok);
    EXPECT_EQ(first.second, second.second);
    m.seed = 12;
    EXPECT_NE(run_to_string(m).second, first.second);
}

TEST(Run, ValidateReferenceRunPasses) {
    cli::RunManifest m;
    m.command = cli::Command::validate;
    m.seed = 42;
    m.trials = 10000;
    for (bool exact : {false, true}) {
        m.exact_exclusion = exact;
        const auto [status, text] = run_to_string(m);
        EXPECT_EQ(status, cli::exit_ok) << text;
        const auto rows = read_csv(text);
        ASSERT_EQ(rows.size(), 7u);
        for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), "1") << rows[i][0];
    }
}

TEST(Run, WritesToFile) {
    cli::RunManifest m;
    m.command = cli::Command::coverage;
    m.deltas = {1e6};
    m.output_path = ::testing::TempDir() + "/coverage.csv";
    EXPECT_EQ(cli::run(m), cli::exit_ok);
    std::ifstream in(m.output_path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("axis_value,", 0), 0u);
    m.output_path = "/nonexistent/dir/out.csv";
    EXPECT_THROW(cli::run(m), std::runtime_error);
}
