#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stokesdrift {

/// A parameter violates its type invariant (non-positive mass, negative dt, ...).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Quadrature did not reach the requested tolerance within its panel budget.
/// The best estimate available at the point of failure is carried along.
class AccuracyFailure : public std::runtime_error {
public:
    AccuracyFailure(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// A simulated trajectory produced a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::uint64_t trajectory, std::uint64_t step)
        : std::runtime_error("trajectory " + std::to_string(trajectory) +
                             " diverged at step " + std::to_string(step)),
          trajectory_(trajectory), step_(step) {}

    std::uint64_t trajectory() const noexcept { return trajectory_; }
    std::uint64_t step() const noexcept { return step_; }

private:
    std::uint64_t trajectory_;
    std::uint64_t step_;
};

/// Direction of a zero vector was requested.
class UndefinedDirection : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace stokesdrift
