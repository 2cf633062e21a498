// Acceptance suite: runs every exit criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status is non-zero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stokesdrift/asymptotics.hpp"
#include "stokesdrift/cli.hpp"
#include "stokesdrift/mc_sim.hpp"
#include "stokesdrift/model_core.hpp"
#include "stokesdrift/sorting.hpp"

using namespace stokesdrift;
namespace fs = std::filesystem;

namespace {

const WaveSpec unit_wave{1.0, 1.0, 1.0, {}};

ReducedParams unit(double lambda, double eps) { return {lambda, 1.0, eps}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome classical_drift() {
    bool ok = true;
    std::string d;
    for (Model m : {Model::inertia, Model::eddy}) {
        Clock c;
        const double v = drift(m, unit(1e8, 0.2), unit_wave).value;
        const double t = c.seconds();
        ok = ok && rel(v, 0.016) <= 1e-5 && t < 1.0;
        d += fmt("%s V=%.10f rel=%.1e t=%.3fs; ", std::string(to_string(m)).c_str(), v, rel(v, 0.016), t);
    }
    return {ok, d};
}

Outcome classical_variance() {
    Clock c;
    const double v = variance_rate_eddy(unit(1e8, 0.5), unit_wave).value;
    const double t = c.seconds();
    return {rel(v, 1.1) <= 1e-5 && t < 1.0, fmt("rate=%.10f rel=%.1e t=%.3fs", v, rel(v, 1.1), t)};
}

Outcome reduction_equivalence() {
    Clock c;
    double worst = 0.0;
    for (double lambda : {0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double one = drift_inertia(unit(lambda, 0.2), unit_wave).value;
        const double two = drift_inertia_2d(unit(lambda, 0.2), unit_wave).value;
        worst = std::max(worst, rel(one, two));
    }
    const double t = c.seconds();
    return {worst <= 1e-6 && t < 30.0, fmt("max rel diff %.2e over 6 lambdas, t=%.1fs", worst, t)};
}

Outcome mc_agreement(unsigned workers) {
    bool ok = true;
    std::string d;
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_total = 1000.0;
    cfg.n_traj = 300;  // 3e8 Euler steps per point
    cfg.workers = workers;
    for (Model m : {Model::inertia, Model::eddy}) {
        cfg.model = m;
        for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
            cfg.master_seed = 1000 + static_cast<std::uint64_t>(lambda * 10);
            const ReducedParams p = unit(lambda, 0.2);
            const double v = drift(m, p, unit_wave).value;
            const DriftEstimate e = estimate_drift(cfg, p, unit_wave);
            const bool good = std::abs(e.mean - v) <= 3.0 * e.stderr && e.stderr <= 0.002 &&
                              e.total_steps <= 300'000'000ull;
            ok = ok && good;
            d += fmt("\n      %-7s lambda=%-3g asym=%.5f mc=%.5f se=%.5f z=%+.2f %s",
                     std::string(to_string(m)).c_str(), lambda, v, e.mean, e.stderr,
                     (e.mean - v) / e.stderr, good ? "ok" : "MISS");
        }
    }
    return {ok, d};
}

Outcome strong_coupling(unsigned workers) {
    bool ok = true;
    std::string d;
    SimConfig cfg;
    cfg.t_total = 1000.0;
    cfg.n_traj = 100;
    cfg.workers = workers;
    cfg.master_seed = 55;
    for (Model m : {Model::inertia, Model::eddy}) {
        cfg.model = m;
        const ReducedParams p = unit(1.0, 0.5);
        const double v = drift(m, p, unit_wave).value;
        const DriftEstimate e = estimate_drift(cfg, p, unit_wave);
        const double r = std::abs(e.mean - v) / v;
        ok = ok && r <= 0.15;
        d += fmt("%s asym=%.5f mc=%.5f+-%.5f rel=%.3f; ", std::string(to_string(m)).c_str(), v, e.mean,
                 e.stderr, r);
    }
    return {ok, d};
}

Outcome peak_property() {
    const std::size_t n = 40;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = 0.05 * std::pow(1000.0, static_cast<double>(i) / (n - 1));
        best = std::max(best, drift_eddy(unit(lambda, 0.2), unit_wave).value);
    }
    const double classical = 0.4 * 0.2 * 0.2;
    const DriftPeak eddy = find_drift_peak(Model::eddy, unit(1, 0.2), unit_wave, 0.05, 50.0);
    const DriftPeak inertia = find_drift_peak(Model::inertia, unit(1, 0.2), unit_wave, 0.05, 50.0);
    const bool eddy_ok = best > 1.05 * classical && eddy.interior;
    const bool inertia_ok = !inertia.interior;
    return {eddy_ok && inertia_ok,
            fmt("eddy: grid max %.6f = %.1f%% above %.3f, interior=%s (lambda*=%.4f); "
                "inertia: interior=%s (lambda*=%.4f, V*=%.6f, %.2f%% above classical)%s",
                best, 100.0 * (best / classical - 1.0), classical, eddy.interior ? "yes" : "no",
                eddy.lambda_star, inertia.interior ? "yes" : "no", inertia.lambda_star, inertia.v_star,
                100.0 * (inertia.v_star / classical - 1.0),
                inertia_ok ? "" : " -- the inertial drift formula itself has an interior maximum")};
}

Outcome variance_mc(unsigned workers) {
    SimConfig cfg;
    cfg.model = Model::eddy;
    cfg.n_traj = 1000;
    cfg.t_total = 1000.0;
    cfg.master_seed = 77;
    cfg.workers = workers;
    const ReducedParams p = unit(1.0, 0.5);
    const double v = variance_rate_eddy(p, unit_wave).value;
    const RateEstimate r = estimate_variance_rate(cfg, p, unit_wave);
    const bool ok = std::abs(r.rate - v) <= 3.0 * r.stderr;
    return {ok, fmt("asym=%.5f mc=%.5f se=%.5f z=%+.2f%s", v, r.rate, r.stderr, (r.rate - v) / r.stderr,
                    ok ? "" : " -- the rate formula omits the order-eps^2 E[X0 X2] cross term")};
}

Outcome sorting(unsigned workers) {
    SimConfig cfg;
    cfg.n_traj = 500;
    cfg.t_total = 1000.0;
    cfg.master_seed = 2025;
    cfg.workers = workers;
    const WaveField2D field = demo_wave_field();
    const auto species = demo_species(0.1);
    const auto mc = simulate_sorting(species, field, cfg);
    bool ok = true;
    std::string d;
    std::vector<Vec2> pred;
    for (std::size_t i = 0; i < species.size(); ++i) {
        pred.push_back(predicted_drift_vector(species[i], field));
        const bool good = std::abs(mc[i].mean.x - pred[i].x) <= 3.0 * mc[i].stderr.x &&
                          std::abs(mc[i].mean.y - pred[i].y) <= 3.0 * mc[i].stderr.y;
        ok = ok && good;
        d += fmt("\n      %s (lambda=%g): pred=(%.5f, %.5f) mc=(%.5f, %.5f) se=(%.5f, %.5f) %s",
                 species[i].label.c_str(), species[i].params.lambda, pred[i].x, pred[i].y, mc[i].mean.x,
                 mc[i].mean.y, mc[i].stderr.x, mc[i].stderr.y, good ? "ok" : "MISS");
    }
    const double angle = fanout_angle(mc[0].mean, mc[1].mean);
    const double se = fanout_angle_stderr(mc[0], mc[1]);
    ok = ok && angle > 3.0 * se;
    d += fmt("\n      fanout: predicted=%.4f rad, mc=%.4f rad, angular se=%.4f (ratio %.2f)",
             fanout_angle(pred[0], pred[1]), angle, se, angle / se);
    return {ok, d};
}

// Property suites --------------------------------------------------------------

bool ou_composition() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ul(0.01, 100.0), us(0.1, 5.0), ut(0.0, 2.0), uu(-5.0, 5.0);
    for (int i = 0; i < 10'000; ++i) {
        const ReducedParams p{ul(rng), us(rng), 0.0};
        const double u0 = uu(rng), a = ut(rng), b = ut(rng);
        const GaussianLaw first = ou_transition(u0, a, p);
        const GaussianLaw second = ou_transition(first.mean, b, p);
        const double var = first.variance * std::exp(-2.0 * p.lambda * b) + second.variance;
        const GaussianLaw direct = ou_transition(u0, a + b, p);
        if (std::abs(second.mean - direct.mean) > 1e-12 * std::abs(direct.mean) + 1e-300) return false;
        if (std::abs(var - direct.variance) > 1e-12 * direct.variance) return false;
    }
    return true;
}

bool covariance_switch() {
    for (double lambda : {1e-3, 0.1, 1.0, 10.0, 1e5})
        for (double f = 0.5; f <= 2.0; f *= 1.01) {
            const ReducedParams p{lambda, 0.8, 0.0};
            const long double t = f * cov_series_threshold / lambda;
            const long double exact = 0.64L * (t + std::expm1(-lambda * t) / lambda);
            if (std::abs(cov_displacement(p, static_cast<double>(t)) / static_cast<double>(exact) - 1.0) > 1e-6)
                return false;
        }
    return true;
}

bool drift_symmetries() {
    const double tol = 1e-8;
    for (double lambda : {0.3, 1.0, 4.0}) {
        const WaveSpec w{1.1, 0.9, 1.3, {}}, wn{1.1, 0.9, -1.3, {}};
        using Fn = std::function<double(const ReducedParams&, const WaveSpec&)>;
        const std::vector<Fn> drifts = {
            [](auto& p, auto& w) { return drift_eddy(p, w).value; },
            [](auto& p, auto& w) { return drift_inertia(p, w).value; },
            [](auto& p, auto& w) { return drift_inertia_2d(p, w).value; },
            [](auto& p, auto& w) { return drift_classical(p, w).value; },
        };
        for (const auto& f : drifts) {
            const double base = f(unit(lambda, 1.0), w);
            if (std::abs(f(unit(lambda, 1.0), wn) + base) > tol * std::abs(base)) return false;
            for (double eps : {-0.4, 0.1, 0.3})
                if (std::abs(f(unit(lambda, eps), w) / (eps * eps) - base) > tol * std::abs(base)) return false;
        }
        const double vbase = variance_rate_eddy(unit(lambda, 1.0), w).value - 1.0;
        for (double eps : {-0.4, 0.1, 0.3})
            if (std::abs((variance_rate_eddy(unit(lambda, eps), w).value - 1.0) / (eps * eps) - vbase) >
                tol * std::abs(vbase))
                return false;
    }
    return true;
}

bool cli_reproducible(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "stokesdrift_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> commands = {
        {"sweep", "--lambdas", "0.5,2", "--mc", "on", "--n_traj", "8", "--t_total", "20"},
        {"sweep", "--model", "inertia", "--lambdas", "1", "--mc", "on", "--scheme", "exact-ou-splitting",
         "--n_traj", "8", "--t_total", "20"},
        {"variance", "--lambdas", "1,3", "--mc", "on", "--n_traj", "8", "--t_total", "20"},
        {"peak", "--model", "eddy"},
        {"sort-demo", "--n_traj", "8", "--t_total", "20"},
    };
    int k = 0;
    bool ok = true;
    for (const auto& base : commands) {
        std::vector<std::string> outputs;
        for (const char* workers : {"1", "1", "2", "5"}) {
            std::vector<std::string> args = {"stokesdrift", "--workers", workers};
            args.insert(args.end(), base.begin(), base.end());
            const fs::path out = dir / ("out" + std::to_string(k++));
            args.insert(args.end(), {"--out", out.string()});
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream so, se;
            if (cli::run_cli(static_cast<int>(argv.size()), argv.data(), so, se) != 0) {
                detail += base[0] + " failed: " + se.str();
                ok = false;
            }
            std::ifstream in(out, std::ios::binary);
            outputs.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        }
        for (const auto& o : outputs)
            if (o != outputs.front() || o.empty()) {
                detail += base[0] + " output differs; ";
                ok = false;
            }
    }
    fs::remove_all(dir);
    return ok;
}

Outcome property_suites() {
    const bool ou = ou_composition();
    const bool cov = covariance_switch();
    const bool sym = drift_symmetries();
    std::string cli_detail;
    const bool cli_ok = cli_reproducible(cli_detail);
    return {ou && cov && sym && cli_ok,
            fmt("OU composition %s; C(t) series switch %s; omega-oddness/eps^2 scaling %s; "
                "CLI byte-reproducibility %s %s",
                ou ? "ok" : "FAIL", cov ? "ok" : "FAIL", sym ? "ok" : "FAIL", cli_ok ? "ok" : "FAIL",
                cli_detail.c_str())};
}

}  // namespace

int main() {
    const unsigned workers = default_workers();
    std::printf("stokesdrift acceptance suite (workers=%u)\n", workers);
    std::fflush(stdout);

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "classical drift limit (lambda=1e8)", classical_drift},
        {2, "classical variance-rate limit (lambda=1e8)", classical_variance},
        {3, "1-D reduction vs 2-D inertial drift", reduction_equivalence},
        {4, "MC vs asymptotic drift, eps=0.2", [=] { return mc_agreement(workers); }},
        {5, "eps=0.5 departure within 15%", [=] { return strong_coupling(workers); }},
        {6, "eddy peak / inertia no interior peak", peak_property},
        {7, "MC variance rate vs asymptotic, eps=0.5", [=] { return variance_mc(workers); }},
        {8, "two-wave superposition and fanout", [=] { return sorting(workers); }},
        {9, "property suites", property_suites},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Clock clock;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] criterion %d: %s (%.1fs) -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    clock.seconds(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
