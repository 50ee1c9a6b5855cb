// SPDX-License-Identifier: Apache-2.0
//
// Load and rate-coverage analysis of the two-tier network.
//
// Outcomes at the typical UE are split into five scenarios:
//   S1  no LoS BS of either tier (never covered)
//   S2  only macro LoS BSs        -> served by the nearest macro BS
//   S3  only micro LoS BSs        -> served by the nearest micro BS
//   S4  both present, r_s > rho r_m -> served by the nearest macro BS
//   S5  both present, otherwise   -> served by the nearest micro BS
//
// Coverage in each scenario is an outer integral over the serving distance x
// of sum_{k<M} (-a)^k/k! L^(k)(a) with a = psi x^alpha, where L is the Laplace
// transform of interference plus noise. L = exp(g) and every derivative of g
// is an integral over interferer distance of a closed-form kernel, so the
// derivative stack is exact up to quadrature error.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "model.hpp"
#include "numerics.hpp"

namespace mmhetnet::analysis {

using numerics::DerivativeStack;
using numerics::QuadratureSpec;

enum class Scenario { s2, s3, s4, s5 };

inline constexpr std::array<Scenario, 4> all_scenarios = {Scenario::s2, Scenario::s3, Scenario::s4, Scenario::s5};

inline const char* to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::s2: return "S2";
    case Scenario::s3: return "S3";
    case Scenario::s4: return "S4";
    case Scenario::s5: return "S5";
    }
    return "?";
}

inline TierId serving_tier(Scenario s) noexcept {
    return (s == Scenario::s2 || s == Scenario::s4) ? TierId::macro : TierId::micro;
}

struct AnalysisOptions {
    /// Also exclude the interferers that association rules out in S4/S5
    /// (micro BSs closer than rho*x, macro BSs closer than x/rho). Off by
    /// default: the reference expressions integrate those tiers from 0.
    bool exact_exclusion = false;
    QuadratureSpec outer{.rel_tol = 1e-8, .abs_tol = 1e-13, .max_subdivisions = 400};
    QuadratureSpec inner{.rel_tol = 1e-10, .abs_tol = 1e-300, .max_subdivisions = 400};
};

// ---------------------------------------------------------------------------
// Association and load

struct AssociationReport {
    double rho = 1.0;
    double b_macro = 0.0;       ///< Pr(macro LoS process non-empty)
    double b_micro = 0.0;
    double empty_macro = 1.0;   ///< 1 - b_macro, evaluated without cancellation
    double empty_micro = 1.0;
    double p_assoc_macro = 0.0; ///< Pr(S2) + Pr(S4)
    double p_assoc_micro = 0.0; ///< Pr(S3) + Pr(S5)
    double load_macro = 0.0;    ///< mean UEs per macro BS
    double load_micro = 0.0;
    double scenario1_prob = 0.0;
    /// Pr(S2), Pr(S3), Pr(S4), Pr(S5).
    std::array<double, 4> scenario_prob{};

    [[nodiscard]] double scenario_probability(Scenario s) const noexcept {
        return scenario_prob[static_cast<std::size_t>(s)];
    }
};

/// Pr(S4): both tiers present and the macro BS wins. Integrates over the
/// nearest micro distance.
inline double macro_overlap_probability(const NetworkConfig& cfg, const QuadratureSpec& spec = {}) {
    const double rho = association_ratio(cfg);
    const auto dm = distance_stats(cfg.macro);
    const auto ds = distance_stats(cfg.micro);
    if (ds.b_void == 0.0 || dm.b_void == 0.0) return 0.0;
    const double cm = cfg.macro.lambda_los * std::numbers::pi;
    auto integrand = [&](double x) {
        const double y = x / rho;
        const double macro_within = y >= dm.mu ? dm.b_void : -std::expm1(-cm * y * y);
        return ds.joint_pdf(x) * macro_within;
    };
    const std::array<double, 1> kink{rho * dm.mu};
    return numerics::integrate_split(integrand, 0.0, ds.mu, kink, spec);
}

/// Pr(S5): both tiers present and the micro BS wins. Integrates over the
/// nearest macro distance.
inline double micro_overlap_probability(const NetworkConfig& cfg, const QuadratureSpec& spec = {}) {
    const double rho = association_ratio(cfg);
    const auto dm = distance_stats(cfg.macro);
    const auto ds = distance_stats(cfg.micro);
    if (ds.b_void == 0.0 || dm.b_void == 0.0) return 0.0;
    const double cs = cfg.micro.lambda_los * std::numbers::pi;
    auto integrand = [&](double x) {
        const double y = rho * x;
        const double micro_within = y >= ds.mu ? ds.b_void : -std::expm1(-cs * y * y);
        return dm.joint_pdf(x) * micro_within;
    };
    const std::array<double, 1> kink{ds.mu / rho};
    return numerics::integrate_split(integrand, 0.0, dm.mu, kink, spec);
}

inline AssociationReport association_probabilities(const NetworkConfig& cfg, const QuadratureSpec& spec = {}) {
    cfg.validate();
    const auto dm = distance_stats(cfg.macro);
    const auto ds = distance_stats(cfg.micro);
    AssociationReport r;
    r.rho = association_ratio(cfg);
    r.b_macro = dm.b_void;
    r.b_micro = ds.b_void;
    r.empty_macro = dm.p_empty;
    r.empty_micro = ds.p_empty;
    const double s2 = dm.b_void * ds.p_empty;
    const double s3 = ds.b_void * dm.p_empty;
    const double s4 = macro_overlap_probability(cfg, spec);
    const double s5 = micro_overlap_probability(cfg, spec);
    r.scenario_prob = {s2, s3, s4, s5};
    r.scenario1_prob = dm.p_empty * ds.p_empty;
    r.p_assoc_macro = s2 + s4;
    r.p_assoc_micro = s3 + s5;
    const double lam_all_m = cfg.macro.lambda_all();
    const double lam_all_s = cfg.micro.lambda_all();
    r.load_macro = lam_all_m > 0.0 ? cfg.lambda_u * r.p_assoc_macro / lam_all_m : 0.0;
    r.load_micro = lam_all_s > 0.0 ? cfg.lambda_u * r.p_assoc_micro / lam_all_s : 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Interference kernels

/// Angle-integrated interference kernel of one tier at distance r:
///   theta [1 - (1 + a P G_max / (M r^alpha))^-M]
///   + (2 pi - theta) [1 - (1 + a P G_min / (M r^alpha))^-M].
inline double omega_kernel(const TierParams& tier, double alpha, double a, double r, int m) {
    if (!(a >= 0.0)) throw DomainError("omega_kernel: a must be >= 0");
    if (!(r > 0.0)) throw DomainError("omega_kernel: r must be > 0");
    const double r_alpha = std::pow(r, alpha);
    auto lobe = [&](double gain) {
        const double z = a * tier.power * gain / (m * r_alpha);
        return -std::expm1(-m * std::log1p(z));
    };
    const double side_width = 2.0 * std::numbers::pi - tier.beamwidth;
    double value = tier.beamwidth * lobe(tier.g_max);
    if (side_width > 0.0) value += side_width * lobe(tier.g_min);
    return value;
}

namespace detail {

/// n-th a-derivative of the angle-integrated kernel (n = 0 is the kernel).
/// For a lobe with c = P G / (M r^alpha):
///   d^n/da^n [1 - (1 + c a)^-M] = (-1)^(n+1) c^n (M)_n (1 + c a)^(-M-n).
inline double kernel_derivative(const TierParams& tier, double alpha, int m, int n, double a, double r) {
    if (n == 0) return omega_kernel(tier, alpha, a, r, m);
    const double r_alpha = std::pow(r, alpha);
    double rising = 1.0;
    for (int i = 0; i < n; ++i) rising *= m + i;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    auto lobe = [&](double gain) {
        const double k = tier.power * gain / m;
        const double denom = r_alpha + a * k;
        return std::pow(k / denom, n) * std::pow(r_alpha / denom, m);
    };
    const double side_width = 2.0 * std::numbers::pi - tier.beamwidth;
    double value = tier.beamwidth * lobe(tier.g_max);
    if (side_width > 0.0) value += side_width * lobe(tier.g_min);
    return sign * rising * value;
}

/// lambda * int_lower^mu r * kernel^(n)(a, r) dr for one interfering tier.
inline double tier_exponent_term(const TierParams& tier, double alpha, int m, int n, double a, double lower,
                                 const QuadratureSpec& spec) {
    if (tier.lambda_los == 0.0 || lower >= tier.mu) return 0.0;
    if (n >= 1 && a <= 0.0 && lower <= 0.0)
        throw DomainError("interference exponent derivative diverges at a = 0 with interferers from the origin");
    auto integrand = [&](double r) { return r * kernel_derivative(tier, alpha, m, n, a, r); };
    // The kernel changes regime where a P G / (M r^alpha) ~ 1.
    std::array<double, 2> knees{};
    std::size_t count = 0;
    if (a > 0.0) {
        knees[count++] = std::pow(a * tier.power * tier.g_max / m, 1.0 / alpha);
        if (tier.g_min != tier.g_max) knees[count++] = std::pow(a * tier.power * tier.g_min / m, 1.0 / alpha);
    }
    return tier.lambda_los *
           numerics::integrate_split(integrand, std::max(lower, 0.0), tier.mu, std::span<const double>(knees.data(), count),
                                     spec);
}

struct InterfererField {
    const TierParams* tier;
    double lower; ///< inner radius of the interferer region
};

inline std::array<InterfererField, 2> interferer_fields(const NetworkConfig& cfg, Scenario s, double x,
                                                        bool exact_exclusion) {
    const double rho = association_ratio(cfg);
    const double beyond = std::numeric_limits<double>::infinity();
    switch (s) {
    case Scenario::s2: return {{{&cfg.macro, x}, {&cfg.micro, beyond}}};
    case Scenario::s3: return {{{&cfg.macro, beyond}, {&cfg.micro, x}}};
    case Scenario::s4: return {{{&cfg.macro, x}, {&cfg.micro, exact_exclusion ? rho * x : 0.0}}};
    case Scenario::s5: return {{{&cfg.macro, exact_exclusion ? x / rho : 0.0}, {&cfg.micro, x}}};
    }
    return {};
}

} // namespace detail

/// g^(n)(a) for g(a) = -a sigma^2 - sum_tiers lambda int r Omega dr, the log
/// of the Laplace transform of interference plus noise seen in `scenario`
/// when the serving BS sits at distance x. n = 0 gives g itself.
inline double laplace_exponent(const NetworkConfig& cfg, Scenario scenario, int n, double a, double x,
                               const AnalysisOptions& opts = {}) {
    if (n < 0) throw DomainError("laplace_exponent: order must be >= 0");
    const int m = cfg.fading.m;
    double value = 0.0;
    if (n == 0) value = -a * cfg.noise;
    else if (n == 1) value = -cfg.noise;
    for (const auto& field : detail::interferer_fields(cfg, scenario, x, opts.exact_exclusion))
        value -= detail::tier_exponent_term(*field.tier, cfg.alpha, m, n, a, field.lower, opts.inner);
    return value;
}

/// g^(n)(a) for n >= 1. The value itself comes from laplace_exponent or
/// laplace_derivatives.
inline double omega_exponent_derivatives(const NetworkConfig& cfg, Scenario scenario, int n, double a, double x,
                                         const AnalysisOptions& opts = {}) {
    if (n < 1) throw DomainError("omega_exponent_derivatives: order must be >= 1");
    return laplace_exponent(cfg, scenario, n, a, x, opts);
}

/// L^(k)(a) for k = 0..k_max.
inline DerivativeStack laplace_derivatives(const NetworkConfig& cfg, Scenario scenario, double a, double x, int k_max,
                                           const AnalysisOptions& opts = {}) {
    return numerics::exp_form_derivatives(
        [&](int n, double at) { return laplace_exponent(cfg, scenario, n, at, x, opts); }, a, k_max);
}

// ---------------------------------------------------------------------------
// Coverage

struct SinrQuery {
    Scenario scenario = Scenario::s2;
    double tau = 0.0;
    double psi = 0.0;               ///< M tau / (P G_max) of the serving tier
    double serving_prefactor = 0.0; ///< P G_max of the serving tier; kappa = prefactor * x^-alpha
};

inline SinrQuery make_query(const NetworkConfig& cfg, Scenario s, double tau) {
    if (!(tau >= 0.0)) throw DomainError("SINR threshold must be >= 0");
    const auto& tier = cfg.tier(serving_tier(s));
    const double prefactor = tier.power * tier.g_max;
    return {s, tau, cfg.fading.m * tau / prefactor, prefactor};
}

/// Pr(SINR > tau and the scenario occurs).
inline double scenario_coverage(const NetworkConfig& cfg, const SinrQuery& query, const AnalysisOptions& opts = {}) {
    cfg.validate();
    if (!(query.tau >= 0.0)) throw DomainError("SINR threshold must be >= 0");
    if (std::isinf(query.tau) || std::isinf(query.psi)) return 0.0;

    const auto dm = distance_stats(cfg.macro);
    const auto ds = distance_stats(cfg.micro);
    const double rho = association_ratio(cfg);
    const double cm = cfg.macro.lambda_los * std::numbers::pi;
    const double cs = cfg.micro.lambda_los * std::numbers::pi;
    const int m = cfg.fading.m;

    auto conditional_coverage = [&](double x) {
        const double a = query.psi * std::pow(x, cfg.alpha);
        if (a == 0.0) return 1.0;
        const auto stack = laplace_derivatives(cfg, query.scenario, a, x, m - 1, opts);
        double sum = 0.0;
        double coeff = 1.0; // (-a)^k / k!
        for (int k = 0; k < m; ++k) {
            sum += coeff * stack.values[static_cast<std::size_t>(k)];
            coeff *= -a / (k + 1);
        }
        return sum;
    };

    double upper = 0.0;
    std::function<double(double)> weight;
    switch (query.scenario) {
    case Scenario::s2:
        if (dm.b_void == 0.0) return 0.0;
        upper = dm.mu;
        weight = [&](double x) { return ds.p_empty * dm.joint_pdf(x); };
        break;
    case Scenario::s3:
        if (ds.b_void == 0.0) return 0.0;
        upper = ds.mu;
        weight = [&](double x) { return dm.p_empty * ds.joint_pdf(x); };
        break;
    case Scenario::s4:
        if (dm.b_void == 0.0 || ds.b_void == 0.0) return 0.0;
        upper = std::min(ds.mu / rho, dm.mu);
        weight = [&](double x) { return (std::exp(-cs * rho * rho * x * x) - ds.p_empty) * dm.joint_pdf(x); };
        break;
    case Scenario::s5:
        if (dm.b_void == 0.0 || ds.b_void == 0.0) return 0.0;
        upper = std::min(ds.mu, rho * dm.mu);
        weight = [&](double x) { return (std::exp(-cm * x * x / (rho * rho)) - dm.p_empty) * ds.joint_pdf(x); };
        break;
    }
    auto integrand = [&](double x) {
        const double w = weight(x);
        return w == 0.0 ? 0.0 : w * conditional_coverage(x);
    };
    return numerics::integrate(integrand, 0.0, upper, opts.outer);
}

inline double scenario_coverage(const NetworkConfig& cfg, Scenario s, double tau, const AnalysisOptions& opts = {}) {
    return scenario_coverage(cfg, make_query(cfg, s, tau), opts);
}

/// SINR threshold equivalent to a per-user rate threshold under TDMA:
/// tau = 2^(delta * load / spectrum) - 1.
inline double rate_to_sinr_threshold(double delta, double load, double spectrum) {
    return std::expm1(std::numbers::ln2 * delta * load / spectrum);
}

struct CoverageResult {
    double p2 = 0.0;
    double p3 = 0.0;
    double p4 = 0.0;
    double p5 = 0.0;
    double p_c = 0.0;
    double delta = 0.0;
    double tau_macro = 0.0;
    double tau_micro = 0.0;
    AssociationReport association{};
};

inline CoverageResult rate_coverage(const NetworkConfig& cfg, double delta, const AnalysisOptions& opts = {}) {
    if (!(delta > 0.0)) throw DomainError("rate threshold delta must be > 0");
    CoverageResult out;
    out.delta = delta;
    out.association = association_probabilities(cfg, opts.outer);
    out.tau_macro = rate_to_sinr_threshold(delta, out.association.load_macro, cfg.macro.spectrum);
    out.tau_micro = rate_to_sinr_threshold(delta, out.association.load_micro, cfg.micro.spectrum);
    out.p2 = scenario_coverage(cfg, Scenario::s2, out.tau_macro, opts);
    out.p3 = scenario_coverage(cfg, Scenario::s3, out.tau_micro, opts);
    out.p4 = scenario_coverage(cfg, Scenario::s4, out.tau_macro, opts);
    out.p5 = scenario_coverage(cfg, Scenario::s5, out.tau_micro, opts);
    out.p_c = out.p2 + out.p3 + out.p4 + out.p5;
    return out;
}

} // namespace mmhetnet::analysis
