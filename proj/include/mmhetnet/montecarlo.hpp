// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo simulation of the typical UE, used as an independent check of
// the analytical results.
//
// Only LoS BSs inside their tier's LoS ball ever contribute power, so each
// realization samples exactly those two disks. Every trial draws from its own
// engine seeded from (seed, trial index), so results do not depend on how
// trials are spread over threads.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "analysis.hpp"
#include "model.hpp"
#include "parallel.hpp"

namespace mmhetnet::mc {

using Engine = std::mt19937_64;

/// Engine for one trial. The (seed, trial) pair is mixed with SplitMix64 so
/// neighbouring trials get unrelated states.
inline Engine trial_engine(std::uint64_t seed, std::uint64_t trial) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return Engine(mix(mix(seed) ^ trial));
}

struct BsSample {
    double distance = 0.0;         ///< to the typical UE, m
    double polar_angle = 0.0;      ///< position angle around the UE, rad
    double boresight_offset = 0.0; ///< angle between beam and UE direction, rad
    double fading = 1.0;           ///< power gain of the link
};

enum class Association { none, macro, micro };

struct NetworkRealization {
    std::vector<BsSample> macro_points;
    std::vector<BsSample> micro_points;
    Association association = Association::none;
    std::size_t serving_index = 0;

    [[nodiscard]] const std::vector<BsSample>& points(TierId id) const noexcept {
        return id == TierId::macro ? macro_points : micro_points;
    }
};

namespace detail {

inline std::vector<BsSample> sample_tier(const TierParams& tier, int fading_m, Engine& rng) {
    const double mean = tier.lambda_los * std::numbers::pi * tier.mu * tier.mu;
    std::size_t count = 0;
    if (mean > 0.0) count = static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> fading(fading_m, 1.0 / fading_m);
    std::vector<BsSample> points(count);
    for (auto& p : points) {
        p.distance = tier.mu * std::sqrt(unit(rng));
        p.polar_angle = 2.0 * std::numbers::pi * unit(rng);
        p.boresight_offset = 2.0 * std::numbers::pi * unit(rng);
        p.fading = fading(rng);
    }
    return points;
}

inline std::optional<std::size_t> nearest(const std::vector<BsSample>& points) {
    if (points.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].distance < points[best].distance) best = i;
    return best;
}

} // namespace detail

/// Draws one network as seen from the typical UE and applies the biased
/// nearest-LoS association. The serving BS points its beam at the UE; every
/// other BS keeps a uniformly random boresight.
inline NetworkRealization sample_realization(const NetworkConfig& cfg, Engine& rng) {
    NetworkRealization net;
    net.macro_points = detail::sample_tier(cfg.macro, cfg.fading.m, rng);
    net.micro_points = detail::sample_tier(cfg.micro, cfg.fading.m, rng);
    const auto nm = detail::nearest(net.macro_points);
    const auto ns = detail::nearest(net.micro_points);
    const double rho = association_ratio(cfg);
    if (nm && ns) {
        if (net.micro_points[*ns].distance > rho * net.macro_points[*nm].distance) {
            net.association = Association::macro;
            net.serving_index = *nm;
        } else {
            net.association = Association::micro;
            net.serving_index = *ns;
        }
    } else if (nm) {
        net.association = Association::macro;
        net.serving_index = *nm;
    } else if (ns) {
        net.association = Association::micro;
        net.serving_index = *ns;
    }
    if (net.association == Association::macro) net.macro_points[net.serving_index].boresight_offset = 0.0;
    if (net.association == Association::micro) net.micro_points[net.serving_index].boresight_offset = 0.0;
    return net;
}

/// SINR at the typical UE; interference comes from every other LoS BS of
/// both tiers. Zero when nobody serves the UE.
inline double serving_sinr(const NetworkConfig& cfg, const NetworkRealization& net) {
    if (net.association == Association::none) return 0.0;
    const TierId serving = net.association == Association::macro ? TierId::macro : TierId::micro;
    double signal = 0.0;
    double interference = 0.0;
    for (TierId id : {TierId::macro, TierId::micro}) {
        const auto& tier = cfg.tier(id);
        const auto& pts = net.points(id);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i];
            const double power = received_power(tier, cfg.alpha, p.distance, p.boresight_offset, p.fading);
            if (id == serving && i == net.serving_index) signal = power;
            else interference += power;
        }
    }
    return signal / (interference + cfg.noise);
}

/// Probability estimate with a normal-approximation 95% interval.
struct McEstimate {
    double mean = 0.0;
    double half_width_95 = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    static McEstimate from_count(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
        McEstimate e;
        e.trials = trials;
        e.seed = seed;
        if (trials == 0) return e;
        e.mean = static_cast<double>(hits) / static_cast<double>(trials);
        e.half_width_95 = 1.96 * std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
        return e;
    }
};

struct TrialOutcome {
    Association association = Association::none;
    bool macro_present = false;
    bool micro_present = false;
    double sinr = 0.0;
};

struct SimulationOptions {
    unsigned threads = default_thread_count();
};

/// Raw per-trial outcomes; the estimators below are summaries of this.
class LinkSimulation {
public:
    LinkSimulation(const NetworkConfig& cfg, std::uint64_t trials, std::uint64_t seed, const SimulationOptions& opts = {})
        : cfg_(cfg), seed_(seed) {
        cfg.validate();
        if (trials < 1) throw DomainError("simulation needs at least one trial");
        outcomes_.resize(trials);
        parallel_for(outcomes_.size(), opts.threads, [&](std::size_t i) {
            auto rng = trial_engine(seed, i);
            const auto net = sample_realization(cfg_, rng);
            outcomes_[i] = {net.association, !net.macro_points.empty(), !net.micro_points.empty(),
                            serving_sinr(cfg_, net)};
        });
    }

    [[nodiscard]] const std::vector<TrialOutcome>& outcomes() const noexcept { return outcomes_; }
    [[nodiscard]] std::uint64_t trials() const noexcept { return outcomes_.size(); }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const NetworkConfig& config() const noexcept { return cfg_; }

    template <typename Pred>
    [[nodiscard]] McEstimate frequency(Pred&& pred) const {
        std::uint64_t hits = 0;
        for (const auto& o : outcomes_)
            if (pred(o)) ++hits;
        return McEstimate::from_count(hits, trials(), seed_);
    }

    [[nodiscard]] McEstimate association(Association which) const {
        return frequency([which](const TrialOutcome& o) { return o.association == which; });
    }

    /// Empirical Pr(scenario occurs and SINR > tau).
    [[nodiscard]] McEstimate scenario_coverage(analysis::Scenario s, double tau) const {
        return frequency([&](const TrialOutcome& o) { return scenario_of(o) == s && o.sinr > tau; });
    }

    /// Mean loads from the empirical association frequencies.
    [[nodiscard]] std::pair<double, double> empirical_loads() const {
        const double pm = association(Association::macro).mean;
        const double ps = association(Association::micro).mean;
        const double lam_m = cfg_.macro.lambda_all();
        const double lam_s = cfg_.micro.lambda_all();
        return {lam_m > 0.0 ? cfg_.lambda_u * pm / lam_m : 0.0, lam_s > 0.0 ? cfg_.lambda_u * ps / lam_s : 0.0};
    }

    /// Empirical Pr(per-user TDMA rate > delta). Thresholds come from mean
    /// loads: the supplied ones, or the empirical ones by default.
    [[nodiscard]] McEstimate rate_coverage(double delta, std::optional<std::pair<double, double>> loads = {}) const {
        if (!(delta > 0.0)) throw DomainError("rate threshold delta must be > 0");
        const auto [load_m, load_s] = loads ? *loads : empirical_loads();
        const double tau_m = analysis::rate_to_sinr_threshold(delta, load_m, cfg_.macro.spectrum);
        const double tau_s = analysis::rate_to_sinr_threshold(delta, load_s, cfg_.micro.spectrum);
        return frequency([&](const TrialOutcome& o) {
            if (o.association == Association::macro) return o.sinr > tau_m;
            if (o.association == Association::micro) return o.sinr > tau_s;
            return false;
        });
    }

    [[nodiscard]] static std::optional<analysis::Scenario> scenario_of(const TrialOutcome& o) noexcept {
        using analysis::Scenario;
        if (o.association == Association::none) return std::nullopt;
        if (o.macro_present && o.micro_present)
            return o.association == Association::macro ? Scenario::s4 : Scenario::s5;
        return o.association == Association::macro ? Scenario::s2 : Scenario::s3;
    }

private:
    NetworkConfig cfg_;
    std::uint64_t seed_;
    std::vector<TrialOutcome> outcomes_;
};

struct AssociationEstimate {
    McEstimate macro;
    McEstimate micro;
};

inline AssociationEstimate estimate_association(const NetworkConfig& cfg, std::uint64_t trials, std::uint64_t seed,
                                                const SimulationOptions& opts = {}) {
    const LinkSimulation sim(cfg, trials, seed, opts);
    return {sim.association(Association::macro), sim.association(Association::micro)};
}

inline McEstimate estimate_rate_coverage(const NetworkConfig& cfg, double delta, std::uint64_t trials,
                                         std::uint64_t seed, const SimulationOptions& opts = {}) {
    const LinkSimulation sim(cfg, trials, seed, opts);
    return sim.rate_coverage(delta);
}

} // namespace mmhetnet::mc
