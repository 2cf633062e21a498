#pragma once

// Panel quadrature for integrals of the form
//     int_0^inf envelope(t) * sin(omega t) dt   (or cos)
// where the envelope is smooth, positive and eventually decays at least
// exponentially. The semi-infinite domain is truncated where the envelope has
// dropped by exp(-envelope_cutoff) and split into panels narrow enough to
// resolve both the oscillation and the decay. Each panel uses a fixed
// Gauss-Legendre rule; the error estimate is the change under global panel
// halving.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "stokesdrift/errors.hpp"

namespace stokesdrift {

struct QuadratureSettings {
    double rel_tol = 1e-8;
    double envelope_cutoff = 40.0;
    std::size_t max_panels = 1'000'000;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-4))
            throw InvalidParameter("rel_tol must lie in (0, 1e-4]");
        if (!(envelope_cutoff >= 30.0))
            throw InvalidParameter("envelope_cutoff must be >= 30");
        if (max_panels < 1000) throw InvalidParameter("max_panels must be >= 1000");
    }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

enum class Kernel { sin, cos };

namespace detail {

inline constexpr std::size_t gauss_order = 10;

struct GaussRule {
    std::array<double, gauss_order> nodes{};    // on [-1, 1]
    std::array<double, gauss_order> weights{};
};

// Legendre roots by Newton iteration from the Chebyshev-like initial guess.
inline const GaussRule& gauss_rule() {
    static const GaussRule rule = [] {
        GaussRule r;
        constexpr std::size_t n = gauss_order;
        for (std::size_t i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (std::size_t j = 2; j <= n; ++j) {
                    const double pj = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = pj;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

struct PanelSum {
    double value = 0.0;
    double magnitude = 0.0;  // integral of |f|, the scale for the tolerance test
};

template <class F>
PanelSum integrate_uniform(F& f, double t_end, std::size_t panels) {
    const GaussRule& rule = gauss_rule();
    const double h = t_end / static_cast<double>(panels);
    PanelSum sum;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * h;
        double v = 0.0, m = 0.0;
        for (std::size_t i = 0; i < gauss_order; ++i) {
            const double fx = f(mid + 0.5 * h * rule.nodes[i]);
            v += rule.weights[i] * fx;
            m += rule.weights[i] * std::abs(fx);
        }
        sum.value += 0.5 * h * v;
        sum.magnitude += 0.5 * h * m;
    }
    return sum;
}

}  // namespace detail

/// Integrates f over [0, t_end] with panels no wider than max_width, halving
/// the panel width until two successive levels agree to rel_tol.
template <class F>
QuadResult integrate_panels(F&& f, double t_end, double max_width,
                            const QuadratureSettings& settings) {
    if (!(t_end > 0.0)) return {};
    if (!(max_width > 0.0) || !std::isfinite(max_width))
        throw InvalidParameter("integrate_panels: panel width must be positive");
    const double want = std::ceil(t_end / max_width);
    if (want > static_cast<double>(settings.max_panels))
        throw AccuracyFailure("quadrature needs more than max_panels panels",
                              std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::infinity());
    std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(want));

    detail::PanelSum coarse = detail::integrate_uniform(f, t_end, panels);
    for (;;) {
        if (2 * panels > settings.max_panels)
            throw AccuracyFailure("quadrature did not reach rel_tol within max_panels",
                                  coarse.value, std::numeric_limits<double>::infinity());
        panels *= 2;
        const detail::PanelSum fine = detail::integrate_uniform(f, t_end, panels);
        const double err = std::abs(fine.value - coarse.value);
        const double tol = settings.rel_tol * std::abs(fine.value) +
                           64.0 * std::numeric_limits<double>::epsilon() * fine.magnitude;
        if (err <= tol) return {fine.value, err};
        coarse = fine;
    }
}

/// Point where the envelope has fallen by exp(-cutoff) relative to t = 0.
/// Requires a positive, eventually monotonically decaying envelope.
template <class Envelope>
double envelope_horizon(Envelope& envelope, double cutoff) {
    const double log0 = std::log(envelope(0.0));
    if (!std::isfinite(log0))
        throw InvalidParameter("envelope must be positive and finite at t = 0");
    auto below = [&](double t) { return std::log(envelope(t)) < log0 - cutoff; };

    double hi = 1e-9;
    while (!below(hi)) {
        hi *= 2.0;
        if (hi > 1e15)
            throw AccuracyFailure("envelope does not decay", std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::infinity());
    }
    double lo = hi / 2.0;
    if (hi == 1e-9) lo = 0.0;
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// int_0^inf envelope(t) * kernel(omega t) dt.
template <class Envelope>
QuadResult quad_osc_decay(Envelope&& envelope, double omega, Kernel kind,
                          const QuadratureSettings& settings) {
    settings.validate();
    if (kind == Kernel::sin && omega == 0.0) return {};

    const double t_max = envelope_horizon(envelope, settings.envelope_cutoff);
    const double efold = t_max / settings.envelope_cutoff;
    double width = efold;
    if (omega != 0.0) width = std::min(width, std::numbers::pi / std::abs(omega));
    width /= 4.0;

    if (kind == Kernel::sin)
        return integrate_panels([&](double t) { return envelope(t) * std::sin(omega * t); },
                                t_max, width, settings);
    return integrate_panels([&](double t) { return envelope(t) * std::cos(omega * t); },
                            t_max, width, settings);
}

}  // namespace stokesdrift
