// SPDX-License-Identifier: Apache-2.0
//
// Linear search for the micro-tier bias that maximises rate coverage, and the
// one-parameter sweeps over bias, rate threshold, micro density and beamwidth.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "parallel.hpp"

namespace mmhetnet::opt {

/// `points` log-spaced values over [lo, hi], both ends included.
inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi >= lo)) throw DomainError("log_grid: need 0 < lo <= hi");
    if (points == 0) throw DomainError("log_grid: need at least one point");
    if (points == 1) return {lo};
    std::vector<double> grid(points);
    const double l0 = std::log10(lo);
    const double l1 = std::log10(hi);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

struct SearchSpec {
    std::vector<double> grid = log_grid(1.0, 1e4, 60);
    double objective_delta = 3162277.6601683795; // 10^6.5 bit/s
    /// Golden-section pass (in log A_s) between the neighbours of the best
    /// grid point. Off by default.
    bool refine = false;
    analysis::AnalysisOptions analysis{};
    unsigned threads = default_thread_count();

    void validate() const {
        if (grid.empty()) throw DomainError("search grid must be non-empty");
        for (double a : grid)
            if (!(a >= 1.0) || !std::isfinite(a)) throw DomainError("search grid values must be finite and >= 1");
        if (!(objective_delta > 0.0)) throw DomainError("objective delta must be > 0");
    }
};

struct CurvePoint {
    double bias = 0.0;
    double p_c = 0.0;
    std::optional<analysis::CoverageResult> result;
    std::string error; ///< non-empty when evaluation failed; the point is excluded
};

struct Optimum {
    double a_s_opt = 1.0;
    double p_c_opt = 0.0;
    std::vector<CurvePoint> curve; ///< sorted by bias
    std::size_t failed_points = 0;
};

inline Optimum optimize_bias(const NetworkConfig& cfg, const SearchSpec& spec = {}) {
    spec.validate();
    std::vector<double> grid = spec.grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Optimum out;
    out.curve.resize(grid.size());
    parallel_for(grid.size(), spec.threads, [&](std::size_t i) {
        auto& point = out.curve[i];
        point.bias = grid[i];
        try {
            NetworkConfig c = cfg;
            c.bias = grid[i];
            point.result = analysis::rate_coverage(c, spec.objective_delta, spec.analysis);
            point.p_c = point.result->p_c;
        } catch (const std::exception& e) {
            point.error = e.what();
        }
    });

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < out.curve.size(); ++i) {
        if (!out.curve[i].error.empty()) {
            ++out.failed_points;
            continue;
        }
        // Strict comparison keeps the smallest bias among ties.
        if (!best || out.curve[i].p_c > out.curve[*best].p_c) best = i;
    }
    if (!best) throw std::runtime_error("optimize_bias: every grid point failed; first error: " + out.curve[0].error);
    out.a_s_opt = out.curve[*best].bias;
    out.p_c_opt = out.curve[*best].p_c;

    if (spec.refine && out.curve.size() >= 2) {
        const std::size_t lo_i = *best == 0 ? 0 : *best - 1;
        const std::size_t hi_i = std::min(*best + 1, out.curve.size() - 1);
        auto objective = [&](double log_bias) {
            NetworkConfig c = cfg;
            c.bias = std::pow(10.0, log_bias);
            return analysis::rate_coverage(c, spec.objective_delta, spec.analysis).p_c;
        };
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = std::log10(out.curve[lo_i].bias);
        double b = std::log10(out.curve[hi_i].bias);
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = objective(c);
        double fd = objective(d);
        for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = objective(d);
            }
        }
        const double x = fc >= fd ? c : d;
        const double fx = std::max(fc, fd);
        if (fx > out.p_c_opt) {
            out.p_c_opt = fx;
            out.a_s_opt = std::pow(10.0, x);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { bias, delta, lambda_s, beamwidths };

inline const char* to_string(SweepAxis axis) noexcept {
    switch (axis) {
    case SweepAxis::bias: return "bias";
    case SweepAxis::delta: return "delta";
    case SweepAxis::lambda_s: return "lambda_s";
    case SweepAxis::beamwidths: return "beamwidths";
    }
    return "?";
}

inline std::optional<SweepAxis> parse_axis(const std::string& name) {
    for (auto axis : {SweepAxis::bias, SweepAxis::delta, SweepAxis::lambda_s, SweepAxis::beamwidths})
        if (name == to_string(axis)) return axis;
    return std::nullopt;
}

struct SweepRow {
    double axis_value = 0.0;
    std::optional<analysis::CoverageResult> result;
    std::string error;
};

/// Applies one axis value to a copy of the configuration.
///
/// `beamwidths` sets the macro beamwidth to the value and scales the micro
/// beamwidth by the same factor, keeping their ratio.
inline NetworkConfig apply_axis(NetworkConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::bias: cfg.bias = value; break;
    case SweepAxis::delta: break;
    case SweepAxis::lambda_s: cfg.micro.lambda_los = value; break;
    case SweepAxis::beamwidths: {
        const double scale = value / cfg.macro.beamwidth;
        cfg.macro.beamwidth = value;
        cfg.micro.beamwidth *= scale;
        break;
    }
    }
    return cfg;
}

/// One row per value, in input order. A failing row records its error and
/// does not stop the sweep.
inline std::vector<SweepRow> sweep(const NetworkConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                                   double delta, const analysis::AnalysisOptions& opts = {},
                                   unsigned threads = default_thread_count()) {
    if (values.empty()) throw DomainError("sweep: values must be non-empty");
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), threads, [&](std::size_t i) {
        auto& row = rows[i];
        row.axis_value = values[i];
        try {
            const auto c = apply_axis(cfg, axis, values[i]);
            row.result = analysis::rate_coverage(c, axis == SweepAxis::delta ? values[i] : delta, opts);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

} // namespace mmhetnet::opt
