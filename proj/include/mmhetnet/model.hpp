// SPDX-License-Identifier: Apache-2.0
//
// Physical model of a two-tier mmWave HetNet seen from a typical UE at the
// origin: LoS ball blockage, sectored BS antennas, Nakagami-m power fading,
// and max-biased-RSS association between the nearest LoS BS of each tier.
//
// Units are whatever the caller feeds in (the bundled configuration uses mW,
// metres and Hz). Nothing is converted to dB internally.
#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace mmhetnet {

enum class TierId { macro, micro };

inline const char* to_string(TierId id) noexcept { return id == TierId::macro ? "macro" : "micro"; }

/// Per-tier deployment and radio parameters.
///
/// `lambda_los` is the intensity of the LoS-thinned process inside the LoS
/// ball (the quantity tabulated for experiments). The intensity of all BSs of
/// the tier, which the load expressions need, is derived from it.
struct TierParams {
    TierId tier_id = TierId::macro;
    double lambda_los = 0.0; ///< LoS BS intensity per m^2
    double omega = 1.0;      ///< LoS probability inside the ball
    double mu = 1.0;         ///< LoS ball radius, m
    double power = 1.0;      ///< transmit power, mW
    double g_max = 1.0;      ///< main-lobe gain
    double g_min = 1.0;      ///< side-lobe gain
    double beamwidth = 2.0 * std::numbers::pi; ///< main-lobe width, rad
    double spectrum = 1.0;   ///< bandwidth available to one BS, Hz

    /// Intensity of all BSs of the tier. Zero when the tier has no LoS
    /// probability, in which case it never serves anybody and carries no load.
    [[nodiscard]] double lambda_all() const noexcept { return omega > 0.0 ? lambda_los / omega : 0.0; }

    void validate() const {
        const std::string name = tier_id == TierId::macro ? "m" : "s";
        auto require = [&](bool ok, const std::string& what) {
            if (!ok) throw DomainError(std::string(to_string(tier_id)) + " tier: " + what);
        };
        require(std::isfinite(lambda_los) && lambda_los >= 0.0, "lambda_" + name + " >= 0");
        require(omega >= 0.0 && omega <= 1.0, "omega_" + name + " in [0,1]");
        require(omega > 0.0 || lambda_los == 0.0, "lambda_" + name + " must be 0 when omega_" + name + " = 0");
        require(std::isfinite(mu) && mu > 0.0, "mu_" + name + " > 0");
        require(std::isfinite(power) && power > 0.0, "P_" + name + " > 0");
        require(g_min > 0.0 && std::isfinite(g_max) && g_max >= g_min, "G_max," + name + " >= G_min," + name + " > 0");
        require(beamwidth > 0.0 && beamwidth <= 2.0 * std::numbers::pi, "theta_" + name + " in (0, 2*pi]");
        require(std::isfinite(spectrum) && spectrum > 0.0, "S_" + name + " > 0");
    }

    bool operator==(const TierParams&) const = default;
};

/// Nakagami-m fading; the power gain is Gamma(m, 1/m) with unit mean.
struct FadingModel {
    int m = 1;

    static constexpr int max_shape = 8;

    void validate() const {
        if (m < 1 || m > max_shape) throw DomainError("nakagami_m must be an integer in [1,8]");
    }

    bool operator==(const FadingModel&) const = default;
};

struct NetworkConfig {
    TierParams macro{.tier_id = TierId::macro};
    TierParams micro{.tier_id = TierId::micro};
    double lambda_u = 0.1; ///< UE intensity per m^2
    double bias = 1.0;     ///< micro-tier association bias A_s
    double alpha = 2.2;    ///< path-loss exponent
    double noise = 1.0;    ///< noise power, mW
    FadingModel fading{};

    [[nodiscard]] const TierParams& tier(TierId id) const noexcept { return id == TierId::macro ? macro : micro; }
    [[nodiscard]] TierParams& tier(TierId id) noexcept { return id == TierId::macro ? macro : micro; }

    void validate() const {
        macro.validate();
        micro.validate();
        if (macro.tier_id != TierId::macro || micro.tier_id != TierId::micro)
            throw DomainError("tier ids do not match their slots");
        if (!(std::isfinite(lambda_u) && lambda_u > 0.0)) throw DomainError("lambda_u > 0");
        if (!(std::isfinite(bias) && bias >= 1.0)) throw DomainError("A_s >= 1");
        if (!(std::isfinite(alpha) && alpha > 2.0)) throw DomainError("alpha > 2");
        if (!(std::isfinite(noise) && noise > 0.0)) throw DomainError("noise > 0");
        fading.validate();
    }

    bool operator==(const NetworkConfig&) const = default;
};

/// Parameter set used for every experiment unless overridden.
inline NetworkConfig reference_config() {
    NetworkConfig cfg;
    cfg.macro = TierParams{.tier_id = TierId::macro,
                           .lambda_los = 1e-5,
                           .omega = 0.6,
                           .mu = 1000.0,
                           .power = 1e4,
                           .g_max = 4e3,
                           .g_min = 1.0,
                           .beamwidth = 0.1,
                           .spectrum = 1e9};
    cfg.micro = TierParams{.tier_id = TierId::micro,
                           .lambda_los = 1e-4,
                           .omega = 0.5,
                           .mu = 100.0,
                           .power = 1e2,
                           .g_max = 1e3,
                           .g_min = 1.0,
                           .beamwidth = 0.2,
                           .spectrum = 1e9};
    cfg.lambda_u = 1e-1;
    cfg.bias = 100.0;
    cfg.alpha = 2.2;
    cfg.noise = 1.0;
    cfg.fading = FadingModel{1};
    return cfg;
}

// ---------------------------------------------------------------------------
// Pointwise formulas

/// LoS ball: a link is LoS with probability omega strictly inside the ball.
inline double los_probability(double r, const TierParams& tier) {
    if (!(r >= 0.0)) throw DomainError("los_probability: distance must be >= 0");
    return (r > 0.0 && r < tier.mu) ? tier.omega : 0.0;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double theta) {
    if (!std::isfinite(theta)) throw DomainError("angle must be finite");
    double w = std::remainder(theta, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
    return w;
}

/// Sectored pattern; the main lobe includes its edges.
inline double antenna_gain(double theta, const TierParams& tier) {
    return std::abs(wrap_angle(theta)) <= 0.5 * tier.beamwidth ? tier.g_max : tier.g_min;
}

/// CDF of the Gamma(m, 1/m) power gain (finite-sum form, integer m).
inline double fading_cdf(double x, int m) {
    if (m < 1) throw DomainError("fading_cdf: m must be >= 1");
    if (!(x >= 0.0)) throw DomainError("fading_cdf: x must be >= 0");
    if (std::isinf(x)) return 1.0;
    const double mx = m * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < m; ++k) {
        term *= mx / k;
        sum += term;
    }
    return 1.0 - std::exp(-mx) * sum;
}

/// E[exp(s * hbar)] for hbar ~ Gamma(m, 1/m).
inline double fading_mgf(double s, int m) {
    if (m < 1) throw DomainError("fading_mgf: m must be >= 1");
    if (!(s < m)) throw DomainError("fading_mgf: s must be < m");
    return std::pow(1.0 - s / m, -m);
}

/// Distance-ratio threshold rho: the UE picks the nearest LoS macro BS iff
/// r_min,s > rho * r_min,m.
inline double association_ratio(const NetworkConfig& cfg) {
    const double macro_strength = cfg.macro.power * cfg.macro.g_max;
    const double micro_strength = cfg.bias * cfg.micro.power * cfg.micro.g_max;
    return std::pow(macro_strength / micro_strength, -1.0 / cfg.alpha);
}

inline double received_power(const TierParams& tier, double alpha, double r, double theta, double hbar) {
    if (!(r > 0.0)) throw DomainError("received_power: distance must be > 0");
    return tier.power * antenna_gain(theta, tier) * std::pow(r, -alpha) * hbar;
}

/// Statistics of the distance to the nearest LoS BS of one tier.
///
/// `b_void` is Pr(the LoS process is non-empty); `p_empty` is its complement
/// evaluated directly, which matters when b_void rounds to 1. cdf/pdf are
/// conditioned on the process being non-empty. With zero intensity the
/// conditional law degenerates to its small-intensity limit (uniform in the
/// disk).
struct DistanceStats {
    TierId tier = TierId::macro;
    double lambda_los = 0.0;
    double mu = 1.0;
    double b_void = 0.0;
    double p_empty = 1.0;

    [[nodiscard]] double cdf(double x) const noexcept {
        if (x <= 0.0) return 0.0;
        if (x >= mu) return 1.0;
        if (lambda_los == 0.0) return (x * x) / (mu * mu);
        return -std::expm1(-lambda_los * std::numbers::pi * x * x) / b_void;
    }

    [[nodiscard]] double pdf(double x) const noexcept {
        if (x < 0.0 || x > mu) return 0.0;
        if (lambda_los == 0.0) return 2.0 * x / (mu * mu);
        const double c = lambda_los * std::numbers::pi;
        return 2.0 * c * x * std::exp(-c * x * x) / b_void;
    }

    /// Unconditional density of the nearest distance restricted to the ball,
    /// b_void * pdf(x), without the division.
    [[nodiscard]] double joint_pdf(double x) const noexcept {
        if (x < 0.0 || x > mu) return 0.0;
        const double c = lambda_los * std::numbers::pi;
        return 2.0 * c * x * std::exp(-c * x * x);
    }
};

inline DistanceStats distance_stats(const TierParams& tier) {
    DistanceStats d;
    d.tier = tier.tier_id;
    d.lambda_los = tier.lambda_los;
    d.mu = tier.mu;
    const double mass = tier.lambda_los * std::numbers::pi * tier.mu * tier.mu;
    d.b_void = -std::expm1(-mass);
    d.p_empty = std::exp(-mass);
    return d;
}

} // namespace mmhetnet
