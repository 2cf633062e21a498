#pragma once

// Domain types shared by the drift asymptotics, the SDE simulators and the
// multi-wave sorting demo: travelling waves, model parameters, the unforced
// displacement covariance and the Ornstein-Uhlenbeck transition law.

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "stokesdrift/errors.hpp"

namespace stokesdrift {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// One travelling wave f(x, t) = u cos(k x - omega t + phi).
///
/// An empty `fixed_phase` means the phase is drawn uniformly on [0, 2pi)
/// independently for every simulated trajectory.
struct WaveSpec {
    double u = 1.0;
    double k = 1.0;
    double omega = 1.0;
    std::optional<double> fixed_phase;

    /// k == 0 is only accepted with `allow_degenerate_k`; the drift then vanishes.
    void validate(bool allow_degenerate_k = false) const {
        if (!std::isfinite(u) || u < 0.0)
            throw InvalidParameter("wave amplitude u must be finite and >= 0");
        if (!std::isfinite(k) || k < 0.0 || (k == 0.0 && !allow_degenerate_k))
            throw InvalidParameter("wavenumber k must be > 0");
        if (!std::isfinite(omega))
            throw InvalidParameter("wave frequency omega must be finite");
        if (fixed_phase && !(*fixed_phase >= 0.0 && *fixed_phase < two_pi))
            throw InvalidParameter("fixed phase must lie in [0, 2pi)");
    }
};

/// Dimensionless model parameters.
///
/// lambda is the drag relaxation rate (inertia model) or the inverse forcing
/// correlation time (eddy model); the long-time diffusivity is sigma^2 / 2.
/// epsilon may carry either sign: every leading-order quantity depends on
/// epsilon^2 only, and the sign flip is exercised by the symmetry tests.
struct ReducedParams {
    double lambda = 1.0;
    double sigma = 1.0;
    double epsilon = 0.0;

    void validate() const {
        if (!std::isfinite(lambda) || lambda <= 0.0)
            throw InvalidParameter("lambda must be finite and > 0");
        if (!std::isfinite(sigma) || sigma <= 0.0)
            throw InvalidParameter("sigma must be finite and > 0");
        if (!std::isfinite(epsilon))
            throw InvalidParameter("epsilon must be finite");
    }

    ReducedParams with_lambda(double l) const {
        ReducedParams p = *this;
        p.lambda = l;
        return p;
    }
    ReducedParams with_epsilon(double e) const {
        ReducedParams p = *this;
        p.epsilon = e;
        return p;
    }
};

/// Physical inputs of the inertial Langevin particle.
struct PhysicalParams {
    double mass = 1.0;
    double mobility = 1.0;
    double boltzmann = 1.0;
    double temperature = 1.0;
};

struct RelaxationNoise {
    double lambda;
    double sigma;
};

/// lambda = 1 / (b m), sigma = sqrt(2 b K T).
inline RelaxationNoise to_reduced(const PhysicalParams& p) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(p.mass) || !positive(p.mobility) || !positive(p.boltzmann) ||
        !positive(p.temperature))
        throw InvalidParameter("physical parameters must all be strictly positive");
    return {1.0 / (p.mobility * p.mass),
            std::sqrt(2.0 * p.mobility * p.boltzmann * p.temperature)};
}

inline double wave_velocity(const WaveSpec& w, double x, double t, double phi) {
    return w.u * std::cos(w.k * x - w.omega * t + phi);
}

/// Below this value of lambda |t| the covariance switches to its Taylor series.
inline constexpr double cov_series_threshold = 1e-4;

/// Mean-square displacement of the unforced particle over a lag t:
/// C(t) = sigma^2 (|t| + (exp(-lambda |t|) - 1) / lambda).
inline double cov_displacement(const ReducedParams& p, double t) {
    const double a = std::abs(t);
    const double x = p.lambda * a;
    const double s2 = p.sigma * p.sigma;
    if (x < cov_series_threshold) {
        // sigma^2 lambda t^2 / 2 * (1 - x/3 + x^2/12)
        return 0.5 * s2 * p.lambda * a * a * (1.0 - x / 3.0 + x * x / 12.0);
    }
    return s2 * (a + std::expm1(-x) / p.lambda);
}

struct GaussianLaw {
    double mean;
    double variance;
};

/// Exact law of the OU velocity dU = -lambda U dt + lambda sigma dB after a time dt.
inline GaussianLaw ou_transition(double u0, double dt, const ReducedParams& p) {
    if (!(dt >= 0.0)) throw InvalidParameter("ou_transition: dt must be >= 0");
    const double decay = std::exp(-p.lambda * dt);
    // 1 - exp(-2 lambda dt) without cancellation for small dt
    const double spread = -std::expm1(-2.0 * p.lambda * dt);
    return {u0 * decay, 0.5 * p.lambda * p.sigma * p.sigma * spread};
}

inline double ou_stationary_variance(const ReducedParams& p) {
    return 0.5 * p.lambda * p.sigma * p.sigma;
}

template <class Rng>
double ou_stationary_sample(const ReducedParams& p, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(ou_stationary_variance(p)));
    return normal(rng);
}

}  // namespace stokesdrift
