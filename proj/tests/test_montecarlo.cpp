// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <mmhetnet/analysis.hpp>
#include <mmhetnet/montecarlo.hpp>

using namespace mmhetnet;
using mc::Association;

namespace {

double tolerance(const mc::McEstimate& e) { return std::max(0.01, 3.0 * e.half_width_95); }

} // namespace

TEST(Sampling, PoissonCountsAndDiskPositions) {
    const auto cfg = reference_config();
    const int n = 20000;
    double count_m = 0.0;
    double count_s = 0.0;
    double mean_sq_radius = 0.0;
    std::size_t points = 0;
    for (int i = 0; i < n; ++i) {
        auto rng = mc::trial_engine(3, i);
        const auto net = mc::sample_realization(cfg, rng);
        count_m += net.macro_points.size();
        count_s += net.micro_points.size();
        for (const auto& p : net.micro_points) {
            ASSERT_GE(p.distance, 0.0);
            ASSERT_LE(p.distance, cfg.micro.mu);
            mean_sq_radius += p.distance * p.distance;
            ++points;
        }
    }
    const double em = cfg.macro.lambda_los * std::numbers::pi * cfg.macro.mu * cfg.macro.mu;
    const double es = cfg.micro.lambda_los * std::numbers::pi * cfg.micro.mu * cfg.micro.mu;
    EXPECT_NEAR(count_m / n, em, 4.0 * std::sqrt(em / n));
    EXPECT_NEAR(count_s / n, es, 4.0 * std::sqrt(es / n));
    // Uniform in the disk: E[r^2] = mu^2 / 2, Var[r^2] = mu^4 / 12.
    const double mu2 = cfg.micro.mu * cfg.micro.mu;
    EXPECT_NEAR(mean_sq_radius / points, mu2 / 2.0, 4.0 * mu2 / std::sqrt(12.0 * points));
}

TEST(Sampling, FadingHasUnitMean) {
    for (int m : {1, 3}) {
        auto cfg = reference_config();
        cfg.fading.m = m;
        double sum = 0.0;
        std::size_t n = 0;
        for (int i = 0; i < 3000; ++i) {
            auto rng = mc::trial_engine(9, i);
            for (const auto& p : mc::sample_realization(cfg, rng).macro_points) {
                sum += p.fading;
                ++n;
            }
        }
        EXPECT_NEAR(sum / n, 1.0, 3.0 / std::sqrt(m * static_cast<double>(n))) << "m=" << m;
    }
}

TEST(Sampling, NearestDistanceFollowsCdf) {
    const auto cfg = reference_config();
    const auto stats = distance_stats(cfg.micro);
    const int n = 20000;
    std::vector<double> nearest;
    for (int i = 0; i < n; ++i) {
        auto rng = mc::trial_engine(17, i);
        const auto net = mc::sample_realization(cfg, rng);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : net.micro_points) best = std::min(best, p.distance);
        nearest.push_back(best);
    }
    std::sort(nearest.begin(), nearest.end());
    // Empty draws sit at +inf, matching the atom of the CDF beyond mu.
    for (int q = 1; q <= 10; ++q) {
        const double x = cfg.micro.mu * q / 10.0;
        const double empirical =
            static_cast<double>(std::upper_bound(nearest.begin(), nearest.end(), x) - nearest.begin()) / n;
        EXPECT_NEAR(empirical, stats.b_void * stats.cdf(x), 1.36 / std::sqrt(n)) << "x=" << x;
    }
}

TEST(Sampling, ServingBeamPointsAtUser) {
    const auto cfg = reference_config();
    for (int i = 0; i < 200; ++i) {
        auto rng = mc::trial_engine(1, i);
        const auto net = mc::sample_realization(cfg, rng);
        if (net.association == Association::none) continue;
        const auto& pts = net.association == Association::macro ? net.macro_points : net.micro_points;
        EXPECT_EQ(pts[net.serving_index].boresight_offset, 0.0);
    }
}

TEST(Association, MacroOnlyWithoutMicroTier) {
    auto cfg = reference_config();
    cfg.micro.lambda_los = 0.0;
    cfg.micro.omega = 0.0;
    const mc::LinkSimulation sim(cfg, 2000, 5);
    EXPECT_EQ(sim.association(Association::micro).mean, 0.0);
    for (const auto& o : sim.outcomes()) EXPECT_NE(o.association, Association::micro);
}

TEST(Association, SameSeedIsReproducible) {
    const auto cfg = reference_config();
    const mc::LinkSimulation a(cfg, 3000, 77);
    const mc::LinkSimulation b(cfg, 3000, 77);
    const mc::LinkSimulation c(cfg, 3000, 78);
    EXPECT_EQ(a.association(Association::macro).mean, b.association(Association::macro).mean);
    EXPECT_EQ(a.rate_coverage(1e6).mean, b.rate_coverage(1e6).mean);
    bool differs = false;
    for (std::size_t i = 0; i < a.trials(); ++i) differs = differs || a.outcomes()[i].sinr != c.outcomes()[i].sinr;
    EXPECT_TRUE(differs);
}

TEST(Association, ThreadCountDoesNotChangeResults) {
    const auto cfg = reference_config();
    const mc::LinkSimulation one(cfg, 4000, 123, {.threads = 1});
    const mc::LinkSimulation four(cfg, 4000, 123, {.threads = 4});
    for (std::size_t i = 0; i < one.trials(); ++i) {
        ASSERT_EQ(one.outcomes()[i].association, four.outcomes()[i].association);
        ASSERT_EQ(one.outcomes()[i].sinr, four.outcomes()[i].sinr);
    }
}

TEST(Association, SingleTrial) {
    const auto e = mc::estimate_association(reference_config(), 1, 4);
    EXPECT_TRUE(e.macro.mean == 0.0 || e.macro.mean == 1.0);
    EXPECT_EQ(e.macro.trials, 1u);
    EXPECT_THROW(mc::LinkSimulation(reference_config(), 0, 1), DomainError);
}

TEST(Association, MicroPresenceMatchesVoidProbability) {
    const auto cfg = reference_config();
    const mc::LinkSimulation sim(cfg, 20000, 8);
    const auto present = sim.frequency([](const mc::TrialOutcome& o) { return o.micro_present; });
    EXPECT_NEAR(present.mean, 1.0 - std::exp(-std::numbers::pi), tolerance(present));
}

TEST(Association, BiasShiftsUsersToMicroTier) {
    auto cfg = reference_config();
    cfg.bias = 1.0;
    const double low = mc::estimate_association(cfg, 5000, 2).micro.mean;
    cfg.bias = 1e3;
    const double high = mc::estimate_association(cfg, 5000, 2).micro.mean;
    EXPECT_GT(high, low);
}

TEST(Association, AgreesWithAnalysis) {
    for (double lambda_s : {2e-4, 1e-3}) {
        for (double bias : {1.0, 100.0, 1e4}) {
            auto cfg = reference_config();
            cfg.micro.lambda_los = lambda_s;
            cfg.bias = bias;
            const auto sim = mc::estimate_association(cfg, 10000, 42);
            const auto ana = analysis::association_probabilities(cfg);
            EXPECT_NEAR(sim.macro.mean, ana.p_assoc_macro, tolerance(sim.macro));
            EXPECT_NEAR(sim.micro.mean, ana.p_assoc_micro, tolerance(sim.micro));
        }
    }
}

TEST(Coverage, LowRateThresholdMeansAssociated) {
    const auto cfg = reference_config();
    const mc::LinkSimulation sim(cfg, 5000, 6);
    const auto none = sim.association(Association::none);
    EXPECT_NEAR(sim.rate_coverage(1e-6).mean, 1.0 - none.mean, 1e-12);
}

TEST(Coverage, HugeNoiseKillsCoverage) {
    auto cfg = reference_config();
    cfg.noise = 1e30;
    EXPECT_EQ(mc::estimate_rate_coverage(cfg, 1e6, 3000, 1).mean, 0.0);
}

TEST(Coverage, ScenarioCoverageAgreesWithExactInterferenceLimits) {
    auto cfg = reference_config();
    const mc::LinkSimulation sim(cfg, 40000, 2024);
    analysis::AnalysisOptions exact;
    exact.exact_exclusion = true;
    for (auto s : analysis::all_scenarios) {
        const auto est = sim.scenario_coverage(s, 1.0);
        EXPECT_NEAR(analysis::scenario_coverage(cfg, s, 1.0, exact), est.mean, std::max(0.01, 3.0 * est.half_width_95))
            << analysis::to_string(s);
    }
    // The literal limits overcount interference in the micro-served overlap.
    const double literal = analysis::scenario_coverage(cfg, analysis::Scenario::s5, 1.0);
    EXPECT_LT(std::abs(literal - sim.scenario_coverage(analysis::Scenario::s5, 1.0).mean), 0.02);
}

TEST(Coverage, RateCoverageAgreesWithAnalysis) {
    const auto cfg = reference_config();
    const mc::LinkSimulation sim(cfg, 40000, 99);
    const double delta = 3162277.6601683795;
    analysis::AnalysisOptions exact;
    exact.exact_exclusion = true;
    const auto ana = analysis::rate_coverage(cfg, delta, exact);
    const auto emp = sim.rate_coverage(delta);
    EXPECT_NEAR(emp.mean, ana.p_c, tolerance(emp));
    const auto fixed = sim.rate_coverage(delta, std::pair{ana.association.load_macro, ana.association.load_micro});
    EXPECT_NEAR(fixed.mean, ana.p_c, tolerance(fixed));
    // Extra interference in the literal limits can only lower coverage.
    EXPECT_LT(analysis::rate_coverage(cfg, delta).p_c, ana.p_c);
    EXPECT_THROW((void)sim.rate_coverage(0.0), DomainError);
}
