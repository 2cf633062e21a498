#pragma once

// Multi-wave drift in two dimensions. At leading order in epsilon the
// cross-terms between waves of distinct frequency average out, so the net
// drift is the vector sum of single-wave drifts along each wave direction.
// Species with equal diffusivity but different lambda respond differently
// to each wave and so drift in different directions (fanout).

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "stokesdrift/asymptotics.hpp"
#include "stokesdrift/errors.hpp"
#include "stokesdrift/mc_sim.hpp"
#include "stokesdrift/model_core.hpp"
#include "stokesdrift/parallel.hpp"
#include "stokesdrift/rng.hpp"

namespace stokesdrift {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    Vec2& operator+=(Vec2 b) {
        x += b.x;
        y += b.y;
        return *this;
    }
    friend double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
    friend double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 rotated(double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return {c * x - s * y, s * x + c * y};
    }
};

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct DirectedWave {
    Vec2 direction;
    WaveSpec spec;
};

struct WaveField2D {
    std::vector<DirectedWave> waves;

    void validate() const {
        for (const auto& w : waves) {
            w.spec.validate(true);
            if (std::abs(w.direction.norm() - 1.0) > 1e-12)
                throw InvalidParameter("wave direction must be a unit vector");
        }
        // Cross-terms only cancel between waves that differ in wavevector or frequency.
        for (std::size_t i = 0; i < waves.size(); ++i)
            for (std::size_t j = i + 1; j < waves.size(); ++j) {
                const Vec2 ki = waves[i].spec.k * waves[i].direction;
                const Vec2 kj = waves[j].spec.k * waves[j].direction;
                if ((ki - kj).norm() <= 1e-12 && waves[i].spec.omega == waves[j].spec.omega)
                    throw InvalidParameter("waves " + std::to_string(i) + " and " + std::to_string(j) +
                                           " share both wavevector and frequency");
            }
    }

    WaveField2D rotated(double theta) const {
        WaveField2D r = *this;
        for (auto& w : r.waves) w.direction = w.direction.rotated(theta);
        return r;
    }
};

struct SpeciesSpec {
    std::string label;
    ReducedParams params;
    Model model = Model::inertia;
};

/// Leading-order drift vector: sum over waves of the single-wave scalar drift
/// times the wave direction.
inline Vec2 predicted_drift_vector(const SpeciesSpec& species, const WaveField2D& field,
                                   const QuadratureSettings& settings = {}) {
    field.validate();
    Vec2 v;
    for (const auto& w : field.waves)
        v += drift(species.model, species.params, w.spec, settings).value * w.direction;
    return v;
}

struct VectorDriftEstimate {
    std::string label;
    Vec2 mean;
    Vec2 stderr;
    /// Covariance of the two mean components (for angle error propagation).
    double cov_xy = 0.0;
    std::uint64_t n_traj = 0;
    std::uint64_t total_steps = 0;
};

namespace detail {

// Seed for species s, so species run on disjoint streams under one master seed.
inline std::uint64_t species_seed(std::uint64_t master, std::size_t s) {
    return master + 0x9E37'79B9'7F4A'7C15ull * static_cast<std::uint64_t>(s);
}

inline Vec2 simulate_trajectory_2d(const SimConfig& cfg, const SpeciesSpec& sp,
                                   const WaveField2D& field, std::uint64_t seed,
                                   std::uint64_t traj_index) {
    const ReducedParams& p = sp.params;
    RngEngine rng = rng_stream(seed, traj_index);
    const std::size_t nw = field.waves.size();

    // Draw order: one phase per wave (random policy only), velocity x then y,
    // then per step the x and y noise.
    std::vector<double> phase(nw), kx(nw), ky(nw), amp(nw), omega(nw);
    std::vector<Vec2> dir(nw);
    std::uniform_real_distribution<double> uniform_phase(0.0, two_pi);
    for (std::size_t j = 0; j < nw; ++j) {
        const auto& w = field.waves[j];
        phase[j] = w.spec.fixed_phase ? *w.spec.fixed_phase : uniform_phase(rng);
        kx[j] = w.spec.k * w.direction.x;
        ky[j] = w.spec.k * w.direction.y;
        amp[j] = p.epsilon * w.spec.u;
        omega[j] = w.spec.omega;
        dir[j] = w.direction;
    }
    Vec2 x;
    Vec2 u{ou_stationary_sample(p, rng), ou_stationary_sample(p, rng)};

    const StepCoefficients c(cfg.dt, p, cfg.scheme);
    boost::random::normal_distribution<double> normal;
    const std::uint64_t n = cfg.steps();
    for (std::uint64_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        Vec2 forcing;
        for (std::size_t j = 0; j < nw; ++j)
            forcing += amp[j] * std::cos(kx[j] * x.x + ky[j] * x.y - omega[j] * t + phase[j]) * dir[j];
        const Vec2 z{normal(rng), normal(rng)};
        const Vec2 u_old = u;
        if (sp.model == Model::inertia) {
            if (c.scheme == Scheme::euler)
                u = u_old - c.lambda_dt * (u_old - forcing) + c.noise * z;
            else
                u = forcing + c.decay * (u_old - forcing) + c.noise * z;
            x += c.dt * u_old;
        } else {
            u = c.decay * u_old + c.noise * z;
            x += c.dt * (u_old + forcing);
        }
        if (!(std::isfinite(x.x) && std::isfinite(x.y) && std::isfinite(u.x) && std::isfinite(u.y)))
            throw DivergenceError(traj_index, i + 1);
    }
    return x;
}

}  // namespace detail

/// Ensemble drift vectors for each species under the 2-D multi-wave SDE. The
/// model of each species comes from its SpeciesSpec; cfg.model is not used.
inline std::vector<VectorDriftEstimate> simulate_sorting(const std::vector<SpeciesSpec>& species,
                                                         const WaveField2D& field,
                                                         const SimConfig& cfg) {
    cfg.validate();
    field.validate();
    if (cfg.n_traj < 2) throw InvalidParameter("sorting needs at least 2 trajectories");
    std::vector<VectorDriftEstimate> out;
    out.reserve(species.size());
    const double horizon = cfg.horizon();
    for (std::size_t s = 0; s < species.size(); ++s) {
        const SpeciesSpec& sp = species[s];
        sp.params.validate();
        const std::uint64_t seed = detail::species_seed(cfg.master_seed, s);
        const auto ends = parallel_map(cfg.n_traj, cfg.workers, [&](std::size_t i) {
            return detail::simulate_trajectory_2d(cfg, sp, field, seed, i);
        });

        const double n = static_cast<double>(ends.size());
        Vec2 mean;
        for (const Vec2& e : ends) mean += (1.0 / horizon) * e;
        mean = (1.0 / n) * mean;
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (const Vec2& e : ends) {
            const Vec2 d = (1.0 / horizon) * e - mean;
            sxx += d.x * d.x;
            syy += d.y * d.y;
            sxy += d.x * d.y;
        }
        const double norm = (n - 1.0) * n;  // unbiased variance / n
        out.push_back({sp.label,
                       mean,
                       {std::sqrt(sxx / norm), std::sqrt(syy / norm)},
                       sxy / norm,
                       cfg.n_traj,
                       cfg.n_traj * cfg.steps()});
    }
    return out;
}

/// Unsigned angle in [0, pi] between two drift directions.
inline double fanout_angle(Vec2 a, Vec2 b) {
    if (a.norm() == 0.0 || b.norm() == 0.0)
        throw UndefinedDirection("fanout_angle: zero drift vector has no direction");
    return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

/// Standard error of a drift vector's polar angle, by linear propagation of
/// the component standard errors and their covariance.
inline double direction_stderr(const VectorDriftEstimate& e) {
    const double r2 = dot(e.mean, e.mean);
    if (r2 == 0.0) throw UndefinedDirection("direction_stderr: zero drift vector");
    const double vx = e.mean.x, vy = e.mean.y;
    const double var = vy * vy * e.stderr.x * e.stderr.x + vx * vx * e.stderr.y * e.stderr.y -
                       2.0 * vx * vy * e.cov_xy;
    return std::sqrt(std::max(var, 0.0)) / r2;
}

/// Standard error of fanout_angle for two independently simulated species.
inline double fanout_angle_stderr(const VectorDriftEstimate& a, const VectorDriftEstimate& b) {
    return std::hypot(direction_stderr(a), direction_stderr(b));
}

/// The shipped two-wave demonstration field: waves along +45 and -45 degrees
/// with distinct wavenumber and frequency, chosen so that the lambda = 0.5 and
/// lambda = 5 inertial species separate by about half a radian.
inline WaveField2D demo_wave_field() {
    const double r = std::numbers::sqrt2 / 2.0;
    return {{{{r, r}, WaveSpec{2.0, 1.0, 0.25, {}}}, {{r, -r}, WaveSpec{2.0, 1.4, 2.0, {}}}}};
}

inline std::vector<SpeciesSpec> demo_species(double epsilon = 0.1) {
    return {{"light", ReducedParams{5.0, 1.0, epsilon}, Model::inertia},
            {"heavy", ReducedParams{0.5, 1.0, epsilon}, Model::inertia}};
}

}  // namespace stokesdrift
