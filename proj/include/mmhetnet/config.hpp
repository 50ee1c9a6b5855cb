// SPDX-License-Identifier: Apache-2.0
//
// INI-style configuration files. Global keys sit before any section; tier
// keys live in [macro] and [micro]:
//
//   lambda_u = 0.1
//   bias = 100
//   alpha = 2.2
//   noise = 1
//   nakagami_m = 1
//
//   [macro]
//   lambda_los = 1e-5
//   omega = 0.6
//   mu = 1000
//   power = 10000
//   g_max = 4000
//   g_min = 1
//   beamwidth = 0.1
//   spectrum = 1e9
//
//   [micro]
//   ...
//
// lambda_los is the LoS BS intensity; the all-BS intensity is lambda_los /
// omega. Every key is required, unknown keys are rejected, and comment lines
// start with ";".
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "error.hpp"
#include "model.hpp"

namespace mmhetnet::config {

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

inline constexpr std::array<std::string_view, 5> global_keys = {"lambda_u", "bias", "alpha", "noise", "nakagami_m"};
inline constexpr std::array<std::string_view, 8> tier_keys = {"lambda_los", "omega", "mu",        "power",
                                                              "g_max",      "g_min", "beamwidth", "spectrum"};

inline double parse_number(const std::string& key, const std::string& text) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(value))
        throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a finite number");
    return value;
}

class Reader {
public:
    explicit Reader(const boost::property_tree::ptree& tree) : tree_(tree) {}

    double number(const std::string& key) const {
        const auto node = tree_.get_optional<std::string>(key);
        if (!node) throw ConfigError("missing key '" + key + "'");
        return parse_number(key, *node);
    }

    double checked(const std::string& key, bool (*ok)(double), const std::string& constraint) const {
        const double v = number(key);
        if (!ok(v)) throw ConfigError("key '" + key + "' = " + format_number(v) + " out of range: " + constraint);
        return v;
    }

private:
    const boost::property_tree::ptree& tree_;
};

inline TierParams read_tier(const Reader& in, TierId id) {
    const std::string section = to_string(id);
    const std::string sym = id == TierId::macro ? "m" : "s";
    auto key = [&](std::string_view k) { return section + "." + std::string(k); };
    TierParams t;
    t.tier_id = id;
    t.lambda_los = in.checked(key("lambda_los"), [](double v) { return v >= 0.0; }, "lambda_" + sym + " ≥ 0");
    t.omega = in.checked(key("omega"), [](double v) { return v >= 0.0 && v <= 1.0; }, "omega_" + sym + " ∈ [0,1]");
    t.mu = in.checked(key("mu"), [](double v) { return v > 0.0; }, "mu_" + sym + " > 0");
    t.power = in.checked(key("power"), [](double v) { return v > 0.0; }, "P_" + sym + " > 0");
    t.g_max = in.checked(key("g_max"), [](double v) { return v > 0.0; }, "G_max," + sym + " > 0");
    t.g_min = in.checked(key("g_min"), [](double v) { return v > 0.0; }, "G_min," + sym + " > 0");
    if (t.g_max < t.g_min)
        throw ConfigError("key '" + key("g_max") + "' = " + format_number(t.g_max) + " out of range: G_max," + sym +
                          " ≥ G_min," + sym);
    t.beamwidth = in.checked(
        key("beamwidth"), [](double v) { return v > 0.0 && v <= 2.0 * std::numbers::pi; }, "theta_" + sym + " ∈ (0, 2π]");
    t.spectrum = in.checked(key("spectrum"), [](double v) { return v > 0.0; }, "S_" + sym + " > 0");
    if (t.omega == 0.0 && t.lambda_los > 0.0)
        throw ConfigError("key '" + key("lambda_los") + "' must be 0 when omega_" + sym + " = 0");
    return t;
}

inline void reject_unknown_keys(const boost::property_tree::ptree& tree) {
    const std::set<std::string_view> globals(global_keys.begin(), global_keys.end());
    const std::set<std::string_view> tiers(tier_keys.begin(), tier_keys.end());
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            if (!globals.contains(name)) throw ConfigError("unknown key '" + name + "'");
            continue;
        }
        if (name != "macro" && name != "micro") throw ConfigError("unknown section [" + name + "]");
        for (const auto& [sub, _] : node)
            if (!tiers.contains(sub)) throw ConfigError("unknown key '" + name + "." + sub + "'");
    }
}

} // namespace detail

inline NetworkConfig parse_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("unparseable configuration: ") + e.what());
    }
    detail::reject_unknown_keys(tree);
    const detail::Reader r(tree);
    NetworkConfig cfg;
    cfg.lambda_u = r.checked("lambda_u", [](double v) { return v > 0.0; }, "lambda_u > 0");
    cfg.bias = r.checked("bias", [](double v) { return v >= 1.0; }, "A_s ≥ 1");
    cfg.alpha = r.checked("alpha", [](double v) { return v > 2.0; }, "alpha > 2");
    cfg.noise = r.checked("noise", [](double v) { return v > 0.0; }, "noise > 0");
    const double m = r.checked(
        "nakagami_m", [](double v) { return v >= 1.0 && v <= FadingModel::max_shape && v == std::floor(v); },
        "nakagami_m integer in [1,8]");
    cfg.fading.m = static_cast<int>(m);
    cfg.macro = detail::read_tier(r, TierId::macro);
    cfg.micro = detail::read_tier(r, TierId::micro);
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline NetworkConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    return parse_config(in);
}

/// Writes a configuration that parse_config reads back to an identical value.
inline std::string format_config(const NetworkConfig& cfg) {
    std::ostringstream out;
    out << "lambda_u = " << format_number(cfg.lambda_u) << '\n'
        << "bias = " << format_number(cfg.bias) << '\n'
        << "alpha = " << format_number(cfg.alpha) << '\n'
        << "noise = " << format_number(cfg.noise) << '\n'
        << "nakagami_m = " << cfg.fading.m << '\n';
    for (const TierParams* t : {&cfg.macro, &cfg.micro}) {
        out << '\n'
            << '[' << to_string(t->tier_id) << "]\n"
            << "lambda_los = " << format_number(t->lambda_los) << '\n'
            << "omega = " << format_number(t->omega) << '\n'
            << "mu = " << format_number(t->mu) << '\n'
            << "power = " << format_number(t->power) << '\n'
            << "g_max = " << format_number(t->g_max) << '\n'
            << "g_min = " << format_number(t->g_min) << '\n'
            << "beamwidth = " << format_number(t->beamwidth) << '\n'
            << "spectrum = " << format_number(t->spectrum) << '\n';
    }
    return out.str();
}

} // namespace mmhetnet::config
