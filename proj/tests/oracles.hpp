#pragma once

// Test-only reference computations, deliberately independent of the library's
// quadrature and covariance code.

#include <cmath>
#include <functional>

namespace oracle {

// C(t) for t >= 0, straight from the closed form in long double.
inline long double covariance(long double lambda, long double sigma, long double t) {
    return sigma * sigma * (t + (std::exp(-lambda * t) - 1.0L) / lambda);
}

// Composite trapezoid on [0, t_end], halving the step until successive
// results agree to rel_tol (Romberg-free, so it shares nothing with Gauss panels).
inline double trapezoid(const std::function<long double(long double)>& f, long double t_end,
                        double rel_tol = 1e-10) {
    long double h = t_end;
    long double sum = 0.5L * (f(0.0L) + f(t_end));
    long double prev = sum * h;
    for (std::size_t n = 1; n < (std::size_t{1} << 24); n *= 2) {
        long double mid = 0.0L;
        for (std::size_t i = 0; i < n; ++i) mid += f((static_cast<long double>(i) + 0.5L) * h);
        sum += mid;
        h *= 0.5L;
        const long double cur = sum * h;
        if (n >= 64 && std::abs(cur - prev) <= rel_tol * std::abs(cur)) return static_cast<double>(cur);
        prev = cur;
    }
    return static_cast<double>(prev);
}

// Leading-order eddy drift with unit wave parameters except those given.
inline double eddy_drift(double lambda, double sigma, double eps, double u, double k, double omega,
                         double t_end = 80.0) {
    auto f = [=](long double t) {
        return std::exp(-0.5L * k * k * covariance(lambda, sigma, t)) * std::sin(omega * t);
    };
    return 0.5 * eps * eps * u * u * k * trapezoid(f, t_end);
}

inline double inertia_drift(double lambda, double sigma, double eps, double u, double k,
                            double omega, double t_end = 80.0) {
    auto f = [=](long double s) {
        return (1.0L - std::exp(-lambda * s)) *
               std::exp(-0.5L * k * k * covariance(lambda, sigma, s)) * std::sin(omega * s);
    };
    return 0.5 * eps * eps * u * u * k * trapezoid(f, t_end);
}

inline double eddy_variance_rate(double lambda, double sigma, double eps, double u, double k,
                                 double omega, double t_end = 80.0) {
    auto f = [=](long double t) {
        return std::exp(-0.5L * k * k * covariance(lambda, sigma, t)) * std::cos(omega * t);
    };
    return sigma * sigma + eps * eps * u * u * trapezoid(f, t_end);
}

// Order-t part of 2 E[X0 X2] in the eddy expansion, from Stein's lemma with
// Cov(X0_t, X0_s - X0_r) ~ sigma^2 (s - r) away from the endpoints.
inline double eddy_variance_cross_term(double lambda, double sigma, double eps, double u, double k,
                                       double omega, double t_end = 80.0) {
    auto f = [=](long double t) {
        return t * std::exp(-0.5L * k * k * covariance(lambda, sigma, t)) * std::cos(omega * t);
    };
    return -eps * eps * u * u * k * k * sigma * sigma * trapezoid(f, t_end);
}

}  // namespace oracle
