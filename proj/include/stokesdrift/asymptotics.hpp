#pragma once

// Leading-order (epsilon^2) drift and long-time variance rate for the
// inertial and eddy-forced models, evaluated by quadrature, together with
// their lambda -> infinity closed forms and a peak locator over lambda.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "stokesdrift/errors.hpp"
#include "stokesdrift/model_core.hpp"
#include "stokesdrift/quadrature.hpp"

namespace stokesdrift {

enum class Model { inertia, eddy };

inline std::string_view to_string(Model m) { return m == Model::inertia ? "inertia" : "eddy"; }

inline Model parse_model(std::string_view s) {
    if (s == "inertia") return Model::inertia;
    if (s == "eddy") return Model::eddy;
    throw InvalidParameter("unknown model '" + std::string(s) + "' (expected inertia|eddy)");
}

enum class DriftKind { inertia, eddy, classical_limit };

struct DriftValue {
    double value = 0.0;
    DriftKind kind = DriftKind::eddy;
    ReducedParams params;
    WaveSpec wave;
    double error = 0.0;
};

namespace detail {

inline double drift_prefactor(const ReducedParams& p, const WaveSpec& w) {
    return 0.5 * p.epsilon * p.epsilon * w.u * w.u * w.k;
}

inline void check_inputs(const ReducedParams& p, const WaveSpec& w) {
    p.validate();
    w.validate(/*allow_degenerate_k=*/true);
}

// exp(-k^2 C(t) / 2), the Gaussian phase-decorrelation factor.
inline auto decorrelation(const ReducedParams& p, const WaveSpec& w) {
    return [p, half_k2 = 0.5 * w.k * w.k](double t) {
        return std::exp(-half_k2 * cov_displacement(p, t));
    };
}

}  // namespace detail

/// V = (eps^2 u^2 k / 2) int_0^inf sin(omega t) exp(-k^2 C(t) / 2) dt
inline DriftValue drift_eddy(const ReducedParams& p, const WaveSpec& w,
                             const QuadratureSettings& settings = {}) {
    detail::check_inputs(p, w);
    settings.validate();
    const double pre = detail::drift_prefactor(p, w);
    if (pre == 0.0) return {0.0, DriftKind::eddy, p, w, 0.0};
    const QuadResult q = quad_osc_decay(detail::decorrelation(p, w), w.omega, Kernel::sin, settings);
    return {pre * q.value, DriftKind::eddy, p, w, std::abs(pre) * q.error};
}

/// Inertial drift through its one-dimensional form
///     V = (eps^2 u^2 k / 2) int_0^inf (1 - exp(-lambda s)) exp(-k^2 C(s) / 2) sin(omega s) ds,
/// obtained from the double integral over (alpha, beta) with s = alpha + beta.
/// The bracket is split so that each piece has a positive decaying envelope.
inline DriftValue drift_inertia(const ReducedParams& p, const WaveSpec& w,
                                const QuadratureSettings& settings = {}) {
    detail::check_inputs(p, w);
    settings.validate();
    const double pre = detail::drift_prefactor(p, w);
    if (pre == 0.0) return {0.0, DriftKind::inertia, p, w, 0.0};
    auto g = detail::decorrelation(p, w);
    const QuadResult whole = quad_osc_decay(g, w.omega, Kernel::sin, settings);
    const QuadResult damped = quad_osc_decay(
        [&](double s) { return std::exp(-p.lambda * s) * g(s); }, w.omega, Kernel::sin, settings);
    return {pre * (whole.value - damped.value), DriftKind::inertia, p, w,
            std::abs(pre) * (whole.error + damped.error)};
}

/// Inertial drift by iterated quadrature of the double integral
///     V = (eps^2 lambda u^2 k / 2) int_0^inf int_0^inf
///             exp(-lambda beta - k^2 C(alpha + beta) / 2) sin(omega (alpha + beta)) dbeta dalpha.
/// Much slower than drift_inertia; kept as an independent check of the reduction.
inline DriftValue drift_inertia_2d(const ReducedParams& p, const WaveSpec& w,
                                   const QuadratureSettings& settings = {}) {
    detail::check_inputs(p, w);
    settings.validate();
    const double pre = detail::drift_prefactor(p, w);
    if (pre == 0.0) return {0.0, DriftKind::inertia, p, w, 0.0};
    auto g = detail::decorrelation(p, w);

    // Inner integral over beta, with sin(omega (alpha + beta)) expanded so the
    // beta-dependence is a pure sin/cos kernel.
    double inner_error = 0.0;
    auto inner = [&](double alpha) {
        auto env = [&](double beta) { return std::exp(-p.lambda * beta) * g(alpha + beta); };
        if (env(0.0) == 0.0) return 0.0;
        const QuadResult c = quad_osc_decay(env, w.omega, Kernel::cos, settings);
        const QuadResult s = quad_osc_decay(env, w.omega, Kernel::sin, settings);
        inner_error = std::max(inner_error, c.error + s.error);
        return std::sin(w.omega * alpha) * c.value + std::cos(w.omega * alpha) * s.value;
    };

    const double a_max = envelope_horizon(g, settings.envelope_cutoff);
    double width = a_max / settings.envelope_cutoff;
    if (w.omega != 0.0) width = std::min(width, std::numbers::pi / std::abs(w.omega));
    const QuadResult outer = integrate_panels(inner, a_max, width / 4.0, settings);
    const double scale = std::abs(pre) * p.lambda;
    return {scale * outer.value, DriftKind::inertia, p, w,
            scale * (outer.error + inner_error * a_max)};
}

/// lambda -> infinity limit, C(t) = sigma^2 |t|:
///     V = (eps^2 u^2 k / 2) omega / (a^2 + omega^2),  a = k^2 sigma^2 / 2.
inline DriftValue drift_classical(const ReducedParams& p, const WaveSpec& w) {
    detail::check_inputs(p, w);
    const double a = 0.5 * w.k * w.k * p.sigma * p.sigma;
    const double denom = a * a + w.omega * w.omega;
    const double v = denom > 0.0 ? detail::drift_prefactor(p, w) * w.omega / denom : 0.0;
    return {v, DriftKind::classical_limit, p, w, 0.0};
}

/// lim Var[X_t] / t = sigma^2 + eps^2 u^2 int_0^inf cos(omega t) exp(-k^2 C(t) / 2) dt
inline QuadResult variance_rate_eddy(const ReducedParams& p, const WaveSpec& w,
                                     const QuadratureSettings& settings = {}) {
    detail::check_inputs(p, w);
    settings.validate();
    const double s2 = p.sigma * p.sigma;
    const double pre = p.epsilon * p.epsilon * w.u * w.u;
    if (pre == 0.0) return {s2, 0.0};
    const QuadResult q = quad_osc_decay(detail::decorrelation(p, w), w.omega, Kernel::cos, settings);
    return {s2 + pre * q.value, pre * q.error};
}

/// sigma^2 + eps^2 * 2 u^2 k^2 sigma^2 / (k^4 sigma^4 + 4 omega^2)
inline double variance_rate_classical(const ReducedParams& p, const WaveSpec& w) {
    detail::check_inputs(p, w);
    const double s2 = p.sigma * p.sigma;
    const double k2 = w.k * w.k;
    const double denom = k2 * k2 * s2 * s2 + 4.0 * w.omega * w.omega;
    if (denom == 0.0) return s2;
    return s2 + p.epsilon * p.epsilon * 2.0 * w.u * w.u * k2 * s2 / denom;
}

inline DriftValue drift(Model m, const ReducedParams& p, const WaveSpec& w,
                        const QuadratureSettings& settings = {}) {
    return m == Model::inertia ? drift_inertia(p, w, settings) : drift_eddy(p, w, settings);
}

struct DriftPeak {
    double lambda_star = 0.0;
    double v_star = 0.0;
    /// False when the maximum over the range sits at an endpoint.
    bool interior = false;
};

inline constexpr std::size_t peak_grid_points = 40;
inline constexpr double peak_lambda_rel_tol = 1e-4;

/// Maximizes V(lambda) over [lambda_lo, lambda_hi] with a logarithmic grid
/// scan followed by golden-section refinement in log(lambda).
inline DriftPeak find_drift_peak(Model m, const ReducedParams& base, const WaveSpec& w,
                                 double lambda_lo, double lambda_hi,
                                 const QuadratureSettings& settings = {}) {
    if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo) || !std::isfinite(lambda_hi))
        throw InvalidParameter("peak search needs 0 < lambda_lo <= lambda_hi");
    auto v_at = [&](double log_lambda) {
        return drift(m, base.with_lambda(std::exp(log_lambda)), w, settings).value;
    };
    if (lambda_lo == lambda_hi) return {lambda_lo, v_at(std::log(lambda_lo)), false};

    const double a = std::log(lambda_lo), b = std::log(lambda_hi);
    const std::size_t n = peak_grid_points;
    std::vector<double> grid(n), values(n);
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        values[i] = v_at(grid[i]);
        if (values[i] > values[best]) best = i;
    }
    if (best == 0 || best == n - 1) return {std::exp(grid[best]), values[best], false};

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = grid[best - 1], hi = grid[best + 1];
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = v_at(x1), f2 = v_at(x2);
    while (hi - lo > peak_lambda_rel_tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = v_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = v_at(x1);
        }
    }
    DriftPeak peak{std::exp(grid[best]), values[best], true};
    const double x = f1 > f2 ? x1 : x2;
    const double fx = std::max(f1, f2);
    if (fx > peak.v_star) peak = {std::exp(x), fx, true};
    return peak;
}

}  // namespace stokesdrift
