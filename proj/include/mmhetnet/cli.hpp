// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration behind the command-line tool. Every command writes
// one CSV table with a header row; run() returns the process exit status.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "montecarlo.hpp"
#include "optimizer.hpp"

namespace mmhetnet::cli {

enum class Command { associate, coverage, optimize, simulate, sweep, validate };

inline std::optional<Command> parse_command(const std::string& name) {
    if (name == "associate") return Command::associate;
    if (name == "coverage") return Command::coverage;
    if (name == "optimize") return Command::optimize;
    if (name == "simulate") return Command::simulate;
    if (name == "sweep") return Command::sweep;
    if (name == "validate") return Command::validate;
    return std::nullopt;
}

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1; ///< a row failed or validation did not pass
inline constexpr int exit_usage = 2;  ///< bad arguments or configuration

inline constexpr double default_objective_delta = 3162277.6601683795; // 10^6.5

struct RunManifest {
    Command command = Command::coverage;
    std::string config_path;                ///< empty: built-in reference parameters
    std::optional<NetworkConfig> config;    ///< takes precedence over config_path
    std::string output_path = "-";          ///< "-" writes to stdout
    std::uint64_t seed = 42;
    std::uint64_t trials = 10000;
    std::vector<double> deltas;             ///< rate thresholds, bit/s
    double grid_min = 1.0;
    double grid_max = 1e4;
    std::size_t grid_points = 60;
    std::string axis = "bias";              ///< sweep only
    std::vector<double> values;             ///< sweep only
    bool exact_exclusion = false;
    unsigned threads = default_thread_count();

    void validate() const {
        const bool simulates = command == Command::simulate || command == Command::validate;
        if (simulates && trials < 1) throw std::invalid_argument("--trials must be >= 1");
        if (!(grid_min >= 1.0 && grid_max >= grid_min)) throw std::invalid_argument("need 1 <= --grid-min <= --grid-max");
        if (grid_points < 1) throw std::invalid_argument("--grid-points must be >= 1");
        for (double d : deltas)
            if (!(d > 0.0)) throw std::invalid_argument("--delta values must be > 0");
        if (command == Command::sweep) {
            if (!opt::parse_axis(axis)) throw std::invalid_argument("unknown sweep axis '" + axis + "'");
            if (values.empty()) throw std::invalid_argument("sweep needs --values");
        }
    }
};

namespace detail {

using csv::Writer;

inline NetworkConfig resolve_config(const RunManifest& m) {
    if (m.config) return *m.config;
    if (m.config_path.empty()) return reference_config();
    return config::load_config(m.config_path);
}

inline std::vector<double> deltas_or(const RunManifest& m, std::vector<double> fallback) {
    return m.deltas.empty() ? fallback : m.deltas;
}

inline analysis::AnalysisOptions analysis_options(const RunManifest& m) {
    analysis::AnalysisOptions o;
    o.exact_exclusion = m.exact_exclusion;
    return o;
}

inline int write_sweep(std::ostream& out, const std::vector<opt::SweepRow>& rows) {
    Writer w(out);
    w.header({"axis_value", "B_m", "B_s", "P_tm", "P_ts", "L_m", "L_s", "tau_m", "tau_s", "P2", "P3", "P4", "P5", "P_c",
              "error"});
    int status = exit_ok;
    for (const auto& row : rows) {
        if (!row.result) {
            w.row({Writer::num(row.axis_value), "", "", "", "", "", "", "", "", "", "", "", "", "", row.error});
            status = exit_failed;
            continue;
        }
        const auto& c = *row.result;
        const auto& a = c.association;
        w.row({Writer::num(row.axis_value), Writer::num(a.b_macro), Writer::num(a.b_micro), Writer::num(a.p_assoc_macro),
               Writer::num(a.p_assoc_micro), Writer::num(a.load_macro), Writer::num(a.load_micro),
               Writer::num(c.tau_macro), Writer::num(c.tau_micro), Writer::num(c.p2), Writer::num(c.p3),
               Writer::num(c.p4), Writer::num(c.p5), Writer::num(c.p_c), ""});
    }
    return status;
}

inline int run_associate(std::ostream& out, const NetworkConfig& cfg, const RunManifest& m) {
    Writer w(out);
    w.header({"A_s", "rho", "B_m", "B_s", "P_tm", "P_ts", "L_m", "L_s", "P_scenario1", "error"});
    int status = exit_ok;
    for (double bias : opt::log_grid(m.grid_min, m.grid_max, m.grid_points)) {
        try {
            NetworkConfig c = cfg;
            c.bias = bias;
            const auto a = analysis::association_probabilities(c);
            w.row({Writer::num(bias), Writer::num(a.rho), Writer::num(a.b_macro), Writer::num(a.b_micro),
                   Writer::num(a.p_assoc_macro), Writer::num(a.p_assoc_micro), Writer::num(a.load_macro),
                   Writer::num(a.load_micro), Writer::num(a.scenario1_prob), ""});
        } catch (const std::exception& e) {
            w.row({Writer::num(bias), "", "", "", "", "", "", "", "", e.what()});
            status = exit_failed;
        }
    }
    return status;
}

inline int run_optimize(std::ostream& out, const NetworkConfig& cfg, const RunManifest& m) {
    opt::SearchSpec spec;
    spec.grid = opt::log_grid(m.grid_min, m.grid_max, m.grid_points);
    spec.objective_delta = deltas_or(m, {default_objective_delta}).front();
    spec.analysis = analysis_options(m);
    spec.threads = m.threads;
    const auto best = opt::optimize_bias(cfg, spec);
    Writer w(out);
    w.header({"A_s", "P_tm", "P_ts", "L_m", "L_s", "tau_m", "tau_s", "P_c", "optimum", "error"});
    for (const auto& p : best.curve) {
        if (!p.result) {
            w.row({Writer::num(p.bias), "", "", "", "", "", "", "", "0", p.error});
            continue;
        }
        const auto& a = p.result->association;
        w.row({Writer::num(p.bias), Writer::num(a.p_assoc_macro), Writer::num(a.p_assoc_micro),
               Writer::num(a.load_macro), Writer::num(a.load_micro), Writer::num(p.result->tau_macro),
               Writer::num(p.result->tau_micro), Writer::num(p.p_c), p.bias == best.a_s_opt ? "1" : "0", ""});
    }
    return best.failed_points == 0 ? exit_ok : exit_failed;
}

inline int run_simulate(std::ostream& out, const NetworkConfig& cfg, const RunManifest& m) {
    const mc::LinkSimulation sim(cfg, m.trials, m.seed, {.threads = m.threads});
    const auto pm = sim.association(mc::Association::macro);
    const auto ps = sim.association(mc::Association::micro);
    const auto [lm, ls] = sim.empirical_loads();
    Writer w(out);
    w.header({"delta", "P_tm", "P_tm_hw95", "P_ts", "P_ts_hw95", "L_m", "L_s", "P_c", "P_c_hw95", "trials", "seed"});
    for (double delta : deltas_or(m, opt::log_grid(1e5, 1e8, 13))) {
        const auto pc = sim.rate_coverage(delta);
        w.row({Writer::num(delta), Writer::num(pm.mean), Writer::num(pm.half_width_95), Writer::num(ps.mean),
               Writer::num(ps.half_width_95), Writer::num(lm), Writer::num(ls), Writer::num(pc.mean),
               Writer::num(pc.half_width_95), std::to_string(m.trials), std::to_string(m.seed)});
    }
    return exit_ok;
}

/// Analysis against simulation. Association metrics must agree within
/// max(0.01, 3 x the 95% half-width); rate coverage within 0.02.
inline int run_validate(std::ostream& out, const NetworkConfig& cfg, const RunManifest& m) {
    const auto opts = analysis_options(m);
    const mc::LinkSimulation sim(cfg, m.trials, m.seed, {.threads = m.threads});
    const auto assoc = analysis::association_probabilities(cfg);
    Writer w(out);
    w.header({"metric", "delta", "analysis", "simulation", "half_width_95", "abs_delta", "tolerance", "pass"});
    bool all_pass = true;
    auto emit = [&](const std::string& metric, std::optional<double> delta, double analytic, const mc::McEstimate& est,
                    double tolerance) {
        const double diff = std::abs(analytic - est.mean);
        const bool pass = diff <= tolerance;
        all_pass = all_pass && pass;
        w.row({metric, delta ? Writer::num(*delta) : "", Writer::num(analytic), Writer::num(est.mean),
               Writer::num(est.half_width_95), Writer::num(diff), Writer::num(tolerance), pass ? "1" : "0"});
    };
    const auto pm = sim.association(mc::Association::macro);
    const auto ps = sim.association(mc::Association::micro);
    emit("P_tm", std::nullopt, assoc.p_assoc_macro, pm, std::max(0.01, 3.0 * pm.half_width_95));
    emit("P_ts", std::nullopt, assoc.p_assoc_micro, ps, std::max(0.01, 3.0 * ps.half_width_95));
    for (double delta : deltas_or(m, {1e5, 1e6, default_objective_delta, 1e7})) {
        const auto c = analysis::rate_coverage(cfg, delta, opts);
        emit("P_c", delta, c.p_c, sim.rate_coverage(delta), 0.02);
    }
    return all_pass ? exit_ok : exit_failed;
}

} // namespace detail

/// Executes one command, writing its CSV to `out`.
inline int run(const RunManifest& m, std::ostream& out) {
    m.validate();
    const NetworkConfig cfg = detail::resolve_config(m);
    switch (m.command) {
    case Command::associate: return detail::run_associate(out, cfg, m);
    case Command::coverage:
        return detail::write_sweep(out, opt::sweep(cfg, opt::SweepAxis::delta,
                                                   detail::deltas_or(m, opt::log_grid(1e5, 1e8, 13)), 0.0,
                                                   detail::analysis_options(m), m.threads));
    case Command::optimize: return detail::run_optimize(out, cfg, m);
    case Command::simulate: return detail::run_simulate(out, cfg, m);
    case Command::sweep: {
        const auto axis = *opt::parse_axis(m.axis);
        const double delta = detail::deltas_or(m, {default_objective_delta}).front();
        return detail::write_sweep(out, opt::sweep(cfg, axis, m.values, delta, detail::analysis_options(m), m.threads));
    }
    case Command::validate: return detail::run_validate(out, cfg, m);
    }
    return exit_usage;
}

/// Same, writing to m.output_path ("-" for stdout).
inline int run(const RunManifest& m) {
    if (m.output_path == "-" || m.output_path.empty()) return run(m, std::cout);
    std::ofstream file(m.output_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write output file '" + m.output_path + "'");
    return run(m, file);
}

} // namespace mmhetnet::cli
