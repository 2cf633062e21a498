#pragma once

// Monte Carlo simulation of the full nonlinear SDE systems.
//
// Inertia model:   dX = U dt,            dU = -lambda (U - eps f(X, t)) dt + lambda sigma dB
// Eddy model:      dX = (U + eps f(X, t)) dt,   dU = -lambda U dt + lambda sigma dB
//
// Each trajectory starts at x = 0 with U drawn from its stationary law and
// the wave phase drawn per the wave's phase policy. Drift and variance-rate
// estimates are ensemble statistics over independent trajectories.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "stokesdrift/asymptotics.hpp"
#include "stokesdrift/errors.hpp"
#include "stokesdrift/model_core.hpp"
#include "stokesdrift/parallel.hpp"
#include "stokesdrift/rng.hpp"

namespace stokesdrift {

enum class Scheme { euler, exact_ou_splitting };

inline std::string_view to_string(Scheme s) {
    return s == Scheme::euler ? "euler" : "exact-ou-splitting";
}

inline Scheme parse_scheme(std::string_view s) {
    if (s == "euler") return Scheme::euler;
    if (s == "exact-ou-splitting") return Scheme::exact_ou_splitting;
    throw InvalidParameter("unknown scheme '" + std::string(s) +
                           "' (expected euler|exact-ou-splitting)");
}

struct SimConfig {
    double dt = 1e-3;
    double t_total = 1e3;
    std::uint64_t n_traj = 256;
    std::uint64_t master_seed = 1;
    Scheme scheme = Scheme::euler;
    Model model = Model::eddy;
    /// Parallelism only; results do not depend on it.
    unsigned workers = 1;

    std::uint64_t steps() const { return static_cast<std::uint64_t>(std::llround(t_total / dt)); }
    double horizon() const { return static_cast<double>(steps()) * dt; }

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be > 0");
        if (!(t_total >= 10.0 * dt) || !std::isfinite(t_total))
            throw InvalidParameter("t_total must be at least 10 dt");
        if (n_traj < 1) throw InvalidParameter("n_traj must be >= 1");
    }
};

struct ParticleState {
    double x = 0.0;
    double u = 0.0;
    double t = 0.0;
    double phi = 0.0;

    bool finite() const { return std::isfinite(x) && std::isfinite(u) && std::isfinite(t); }
};

struct DriftEstimate {
    double mean = 0.0;
    double stderr = 0.0;
    std::uint64_t n_traj = 0;
    std::uint64_t total_steps = 0;
};

struct RateEstimate {
    double rate = 0.0;
    double stderr = 0.0;
};

namespace detail {

// Per-run constants of one time step.
struct StepCoefficients {
    double dt;
    double lambda_dt;
    double noise;     // multiplies a standard normal draw
    double decay;     // exact OU decay factor (splitting scheme)
    Scheme scheme;

    StepCoefficients(double dt_, const ReducedParams& p, Scheme s) : dt(dt_), scheme(s) {
        lambda_dt = p.lambda * dt;
        if (s == Scheme::euler) {
            noise = p.lambda * p.sigma * std::sqrt(dt);
            decay = 1.0 - lambda_dt;
        } else {
            const GaussianLaw law = ou_transition(1.0, dt, p);
            noise = std::sqrt(law.variance);
            decay = law.mean;
        }
    }
};

inline void advance_inertia(ParticleState& s, const StepCoefficients& c, double eps,
                            const WaveSpec& w, double z) {
    const double forcing = eps * wave_velocity(w, s.x, s.t, s.phi);
    const double u = s.u;
    if (c.scheme == Scheme::euler)
        s.u = u - c.lambda_dt * (u - forcing) + c.noise * z;
    else
        s.u = forcing + (u - forcing) * c.decay + c.noise * z;
    s.x += u * c.dt;
    s.t += c.dt;
}

inline void advance_eddy(ParticleState& s, const StepCoefficients& c, double eps,
                         const WaveSpec& w, double z) {
    const double forcing = eps * wave_velocity(w, s.x, s.t, s.phi);
    const double u = s.u;
    s.u = u * c.decay + c.noise * z;
    s.x += (u + forcing) * c.dt;
    s.t += c.dt;
}

}  // namespace detail

/// One Euler-Maruyama step of the inertia model; `noise` is a standard normal draw.
inline ParticleState step_inertia(ParticleState s, double dt, const ReducedParams& p,
                                  const WaveSpec& w, double noise,
                                  Scheme scheme = Scheme::euler) {
    if (!(dt > 0.0)) throw InvalidParameter("step: dt must be > 0");
    detail::advance_inertia(s, detail::StepCoefficients(dt, p, scheme), p.epsilon, w, noise);
    if (!s.finite()) throw DivergenceError(0, 1);
    return s;
}

/// One step of the eddy model; `noise` is a standard normal draw.
inline ParticleState step_eddy(ParticleState s, double dt, const ReducedParams& p,
                               const WaveSpec& w, double noise, Scheme scheme = Scheme::euler) {
    if (!(dt > 0.0)) throw InvalidParameter("step: dt must be > 0");
    detail::advance_eddy(s, detail::StepCoefficients(dt, p, scheme), p.epsilon, w, noise);
    if (!s.finite()) throw DivergenceError(0, 1);
    return s;
}

struct TrajectoryResult {
    double x_initial = 0.0;
    double x_final = 0.0;
};

/// Initial state of trajectory `traj_index`. Draw order from its stream:
/// phase (when random), then the stationary velocity, then one normal per step.
inline ParticleState initial_state(const ReducedParams& p, const WaveSpec& w, RngEngine& rng) {
    ParticleState s;
    if (w.fixed_phase) {
        s.phi = *w.fixed_phase;
    } else {
        std::uniform_real_distribution<double> phase(0.0, two_pi);
        s.phi = phase(rng);
    }
    s.u = ou_stationary_sample(p, rng);
    return s;
}

/// Runs one trajectory to the configured horizon. When `u_samples` is given,
/// the velocity after every step is appended to it.
inline TrajectoryResult simulate_trajectory(const SimConfig& cfg, const ReducedParams& p,
                                            const WaveSpec& w, std::uint64_t traj_index,
                                            std::vector<double>* u_samples = nullptr) {
    cfg.validate();
    p.validate();
    w.validate(true);
    RngEngine rng = rng_stream(cfg.master_seed, traj_index);
    ParticleState s = initial_state(p, w, rng);
    const TrajectoryResult start{s.x, s.x};

    const detail::StepCoefficients c(cfg.dt, p, cfg.scheme);
    boost::random::normal_distribution<double> normal;  // ziggurat
    const std::uint64_t n = cfg.steps();
    if (u_samples) u_samples->reserve(u_samples->size() + n);
    for (std::uint64_t i = 0; i < n; ++i) {
        // Time is kept as i * dt rather than accumulated.
        s.t = static_cast<double>(i) * cfg.dt;
        const double z = normal(rng);
        if (cfg.model == Model::inertia)
            detail::advance_inertia(s, c, p.epsilon, w, z);
        else
            detail::advance_eddy(s, c, p.epsilon, w, z);
        if (!(std::isfinite(s.x) && std::isfinite(s.u))) throw DivergenceError(traj_index, i + 1);
        if (u_samples) u_samples->push_back(s.u);
    }
    return {start.x_initial, s.x};
}

namespace detail {

inline std::vector<double> displacements(const SimConfig& cfg, const ReducedParams& p,
                                         const WaveSpec& w) {
    cfg.validate();
    p.validate();
    w.validate(true);
    const auto results = parallel_map(cfg.n_traj, cfg.workers, [&](std::size_t i) {
        return simulate_trajectory(cfg, p, w, i);
    });
    std::vector<double> d(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) d[i] = results[i].x_final - results[i].x_initial;
    return d;
}

struct MeanVar {
    double mean;
    double variance;  // unbiased; NaN for a single sample
};

// Two-pass mean and variance in index order.
inline MeanVar mean_variance(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, ss / static_cast<double>(v.size() - 1)};
}

}  // namespace detail

/// Ensemble drift: mean of displacement / horizon over trajectories, with the
/// standard error of that mean (infinite for a single trajectory).
inline DriftEstimate estimate_drift(const SimConfig& cfg, const ReducedParams& p,
                                    const WaveSpec& w) {
    std::vector<double> v = detail::displacements(cfg, p, w);
    const double horizon = cfg.horizon();
    for (double& x : v) x /= horizon;
    const detail::MeanVar mv = detail::mean_variance(v);
    const double se = v.size() < 2 ? std::numeric_limits<double>::infinity()
                                   : std::sqrt(mv.variance / static_cast<double>(v.size()));
    return {mv.mean, se, cfg.n_traj, cfg.n_traj * cfg.steps()};
}

/// Ensemble variance of the displacement divided by the horizon. The standard
/// error assumes near-Gaussian displacements: rate * sqrt(2 / (n - 1)).
inline RateEstimate estimate_variance_rate(const SimConfig& cfg, const ReducedParams& p,
                                           const WaveSpec& w) {
    if (cfg.n_traj < 2) throw InvalidParameter("variance rate needs at least 2 trajectories");
    const std::vector<double> d = detail::displacements(cfg, p, w);
    const detail::MeanVar mv = detail::mean_variance(d);
    const double rate = mv.variance / cfg.horizon();
    return {rate, rate * std::sqrt(2.0 / static_cast<double>(cfg.n_traj - 1))};
}

}  // namespace stokesdrift
