// SPDX-License-Identifier: Apache-2.0
//
// One-dimensional adaptive quadrature and exact derivatives of functions of
// the form L(a) = exp(g(a)).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace mmhetnet::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// 15-point Gauss-Kronrod rule with its embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    double abs_value;

    bool operator<(const Segment& other) const noexcept { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(centre);
    double kronrod = kronrod_weights[7] * fc;
    double gauss = gauss_weights[3] * fc;
    double abs_sum = std::abs(kronrod);
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kronrod_nodes[i];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        kronrod += kronrod_weights[i] * (f1 + f2);
        abs_sum += kronrod_weights[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * (f1 + f2);
    }
    const double value = kronrod * half;
    double error = std::abs((kronrod - gauss) * half);
    // Error can never be resolved below the rounding level of the sum.
    error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half));
    return {lo, hi, value, error, abs_sum * std::abs(half)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |result|). Endpoints are never
/// evaluated, so integrable endpoint singularities are handled by
/// subdivision. Throws AccuracyError (carrying the best estimate) when the
/// subdivision budget runs out.
template <typename F>
    requires std::invocable<F&, double>
QuadratureResult integrate_detailed(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) throw DomainError("integrate: tolerances must be > 0");
    if (!(lo <= hi)) throw DomainError("integrate: requires lo <= hi");
    if (lo == hi) return {};

    std::priority_queue<detail::Segment> heap;
    auto first = detail::gauss_kronrod_15(f, lo, hi);
    double total = first.value;
    double total_error = first.error;
    heap.push(first);

    int subdivisions = 0;
    auto done = [&] { return total_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (!done()) {
        if (subdivisions >= spec.max_subdivisions) {
            throw AccuracyError("integrate: no convergence on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                    "] after " + std::to_string(subdivisions) + " subdivisions",
                                total, total_error);
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Interval cannot be split further in double precision; accept it.
            total_error -= worst.error;
            heap.push({worst.lo, worst.hi, worst.value, 0.0, worst.abs_value});
            continue;
        }
        auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum from the segments to shed accumulated update rounding.
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error, subdivisions};
}

template <typename F>
    requires std::invocable<F&, double>
double integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    return integrate_detailed(std::forward<F>(f), lo, hi, spec).value;
}

/// Integrates over [lo, hi] split at the given interior break points (points
/// outside (lo, hi) are ignored). Use it where the integrand has a kink or a
/// sharp feature at a known location.
template <typename F>
    requires std::invocable<F&, double>
double integrate_split(F&& f, double lo, double hi, std::span<const double> breaks, const QuadratureSpec& spec = {}) {
    if (!(lo <= hi)) throw DomainError("integrate: requires lo <= hi");
    std::vector<double> edges{lo};
    for (double b : breaks)
        if (b > lo && b < hi) edges.push_back(b);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) sum += integrate(f, edges[i], edges[i + 1], spec);
    return sum;
}

/// values[k] = L^(k)(a) for k = 0..k_max.
struct DerivativeStack {
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return values.at(k); }
};

/// Derivatives of L = exp(g) from the derivatives of g via
/// L^(k) = sum_{j<k} C(k-1, j) g^(k-j) L^(j).
///
/// exponent[n] holds g^(n)(a) for n = 0..k_max.
inline DerivativeStack exp_form_derivatives(std::span<const double> exponent) {
    if (exponent.empty()) throw DomainError("exp_form_derivatives: need at least g(a)");
    const std::size_t k_max = exponent.size() - 1;
    DerivativeStack out;
    out.values.resize(k_max + 1);
    out.values[0] = std::exp(exponent[0]);
    for (std::size_t k = 1; k <= k_max; ++k) {
        double binom = 1.0; // C(k-1, j)
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            sum += binom * exponent[k - j] * out.values[j];
            binom = binom * static_cast<double>(k - 1 - j) / static_cast<double>(j + 1);
        }
        out.values[k] = sum;
    }
    return out;
}

/// Same, pulling g^(n)(a) from a callable g_derivs(n, a), n = 0..k_max.
template <typename G>
    requires std::invocable<G&, int, double>
DerivativeStack exp_form_derivatives(G&& g_derivs, double a, int k_max) {
    if (k_max < 0) throw DomainError("exp_form_derivatives: k_max must be >= 0");
    std::vector<double> exponent(static_cast<std::size_t>(k_max) + 1);
    for (int n = 0; n <= k_max; ++n) exponent[static_cast<std::size_t>(n)] = g_derivs(n, a);
    return exp_form_derivatives(std::span<const double>(exponent));
}

} // namespace mmhetnet::numerics
