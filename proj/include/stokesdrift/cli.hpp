#pragma once

// Command-line front end: lambda sweeps of the drift and variance rate (with
// optional Monte Carlo columns), the drift peak search and the two-wave
// sorting demo. Every CSV starts with a comment block holding the fully
// resolved configuration, and re-running a command with the same inputs
// reproduces the output byte for byte whatever the worker count.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stokesdrift/asymptotics.hpp"
#include "stokesdrift/config.hpp"
#include "stokesdrift/errors.hpp"
#include "stokesdrift/mc_sim.hpp"
#include "stokesdrift/model_core.hpp"
#include "stokesdrift/sorting.hpp"

namespace stokesdrift::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_accuracy = 3,
    exit_divergence = 4,
    exit_io = 5,
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KeyInfo {
    const char* name;
    const char* help;
};

inline const std::vector<KeyInfo>& known_keys() {
    static const std::vector<KeyInfo> keys = {
        {"model", "inertia | eddy"},
        {"lambda", "relaxation rate / inverse correlation time"},
        {"sigma", "noise amplitude"},
        {"epsilon", "wave coupling strength"},
        {"u", "wave velocity amplitude"},
        {"k", "wavenumber"},
        {"omega", "wave angular frequency"},
        {"phase", "fixed wave phase in [0, 2pi) or 'uniform'"},
        {"lambdas", "explicit comma-separated lambda sweep"},
        {"lambda_min", "log-range sweep start"},
        {"lambda_max", "log-range sweep end"},
        {"lambda_points", "log-range sweep point count"},
        {"lambda_lo", "peak search lower bound"},
        {"lambda_hi", "peak search upper bound"},
        {"mc", "on | off: add Monte Carlo columns"},
        {"dt", "time step"},
        {"t_total", "trajectory horizon"},
        {"n_traj", "trajectories per estimate"},
        {"seed", "master seed"},
        {"scheme", "euler | exact-ou-splitting"},
        {"rel_tol", "quadrature relative tolerance"},
        {"envelope_cutoff", "quadrature truncation exponent"},
        {"max_panels", "quadrature panel cap"},
        {"species", "sort-demo species as label:lambda, ..."},
        {"waves", "sort-demo waves as angle_deg:u:k:omega, ..."},
        {"columns", "comma-separated subset of output columns"},
        {"out", "output path (stdout when empty)"},
    };
    return keys;
}

inline std::set<std::string> known_key_names() {
    std::set<std::string> s;
    for (const auto& k : known_keys()) s.insert(k.name);
    return s;
}

inline std::map<std::string, std::string> default_values(const std::string& command) {
    std::map<std::string, std::string> d = {
        {"model", "eddy"},        {"lambda", "1"},
        {"sigma", "1"},           {"epsilon", "0.2"},
        {"u", "1"},               {"k", "1"},
        {"omega", "1"},           {"phase", "uniform"},
        {"lambdas", ""},          {"lambda_min", "0.05"},
        {"lambda_max", "50"},     {"lambda_points", "20"},
        {"lambda_lo", "0.05"},    {"lambda_hi", "50"},
        {"mc", "off"},            {"dt", "0.001"},
        {"t_total", "1000"},      {"n_traj", "256"},
        {"seed", "1"},            {"scheme", "euler"},
        {"rel_tol", "1e-8"},      {"envelope_cutoff", "40"},
        {"max_panels", "1000000"}, {"species", "light:5,heavy:0.5"},
        {"waves", "45:2:1:0.25,-45:2:1.4:2"},
        {"columns", ""},          {"out", ""},
    };
    if (command == "variance") d["epsilon"] = "0.5";
    if (command == "sort-demo") {
        d["epsilon"] = "0.1";
        d["model"] = "inertia";
    }
    return d;
}

// ---------------------------------------------------------------------------
// Resolved run configuration

struct RunConfig {
    std::string command;
    Config raw;
    Model model = Model::eddy;
    ReducedParams params;
    WaveSpec wave;
    std::vector<double> lambdas;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    bool mc = false;
    SimConfig sim;
    QuadratureSettings quad;
    std::vector<SpeciesSpec> species;
    WaveField2D field;
    std::vector<std::string> columns;
    std::string out;
};

inline std::vector<double> resolve_sweep(const Config& c) {
    std::vector<double> l;
    if (!trim(c.str("lambdas")).empty()) {
        l = c.num_list("lambdas");
    } else {
        const double lo = c.num("lambda_min"), hi = c.num("lambda_max");
        const std::uint64_t n = c.uint("lambda_points");
        if (n == 1) l.push_back(lo);
        for (std::uint64_t i = 0; n > 1 && i < n; ++i)
            l.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    if (l.empty()) throw ConfigError("the lambda sweep is empty");
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (!(l[i] > 0.0)) throw ConfigError("sweep values must be strictly positive");
        if (i > 0 && !(l[i] > l[i - 1])) throw ConfigError("sweep values must be sorted ascending");
    }
    return l;
}

inline std::vector<SpeciesSpec> resolve_species(const Config& c, const ReducedParams& base, Model m) {
    std::vector<SpeciesSpec> out;
    for (const auto& item : split(c.str("species"), ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2 || parts[0].empty())
            throw ConfigError("species entries must look like label:lambda, got '" + item + "'");
        out.push_back({parts[0], base.with_lambda(parse_double("species", parts[1])), m});
    }
    if (out.empty()) throw ConfigError("no species given");
    return out;
}

inline WaveField2D resolve_field(const Config& c, std::optional<double> phase) {
    WaveField2D f;
    for (const auto& item : split(c.str("waves"), ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 4)
            throw ConfigError("wave entries must look like angle_deg:u:k:omega, got '" + item + "'");
        const double angle = parse_double("waves", parts[0]) * std::numbers::pi / 180.0;
        f.waves.push_back({unit_vector(angle),
                           WaveSpec{parse_double("waves", parts[1]), parse_double("waves", parts[2]),
                                    parse_double("waves", parts[3]), phase}});
    }
    return f;
}

inline RunConfig resolve(const std::string& command, const Config& c) {
    RunConfig r;
    r.command = command;
    r.raw = c;
    try {
        r.model = parse_model(c.str("model"));
        r.params = {c.num("lambda"), c.num("sigma"), c.num("epsilon")};
        std::optional<double> phase;
        if (c.str("phase") != "uniform") phase = c.num("phase");
        r.wave = {c.num("u"), c.num("k"), c.num("omega"), phase};
        r.mc = c.flag("mc");
        r.sim.dt = c.num("dt");
        r.sim.t_total = c.num("t_total");
        r.sim.n_traj = c.uint("n_traj");
        r.sim.master_seed = c.uint("seed");
        r.sim.scheme = parse_scheme(c.str("scheme"));
        r.sim.model = r.model;
        r.quad.rel_tol = c.num("rel_tol");
        r.quad.envelope_cutoff = c.num("envelope_cutoff");
        r.quad.max_panels = c.uint("max_panels");
        r.out = c.str("out");
        if (!trim(c.str("columns")).empty()) r.columns = split(c.str("columns"), ',');

        r.params.validate();
        r.quad.validate();
        if (command == "sort-demo") {
            r.species = resolve_species(c, r.params, r.model);
            r.field = resolve_field(c, phase);
            r.field.validate();
            r.sim.validate();
        } else {
            r.wave.validate();
        }
        if (command == "sweep" || command == "variance") {
            r.lambdas = resolve_sweep(c);
            if (r.mc) r.sim.validate();
        }
        if (command == "variance" && r.model != Model::eddy)
            throw ConfigError("the variance command supports the eddy model only");
        if (command == "peak") {
            r.lambda_lo = c.num("lambda_lo");
            r.lambda_hi = c.num("lambda_hi");
            if (!(r.lambda_lo > 0.0)) throw ConfigError("lambda_lo must be > 0");
            if (r.lambda_hi < r.lambda_lo) throw ConfigError("lambda_hi must be >= lambda_lo");
        }
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    return r;
}

// ---------------------------------------------------------------------------
// Output

inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string header_block(const RunConfig& r) {
    std::ostringstream h;
    h << "# stokesdrift " << r.command << "\n";
    for (const auto& [k, v] : r.raw.entries())
        if (k != "out") h << "# " << k << " = " << v << "\n";
    return h.str();
}

/// A CSV table whose columns can be narrowed to a requested subset.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& os, const std::vector<std::string>& subset) const {
        std::vector<std::size_t> idx;
        if (subset.empty()) {
            for (std::size_t i = 0; i < columns_.size(); ++i) idx.push_back(i);
        } else {
            for (const auto& name : subset) idx.push_back(index_of(name));
        }
        auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t j = 0; j < idx.size(); ++j) os << (j ? "," : "") << cells[idx[j]];
            os << "\n";
        };
        emit(columns_);
        for (const auto& row : rows_) emit(row);
    }

    void check_columns(const std::vector<std::string>& subset) const {
        for (const auto& name : subset) index_of(name);
    }

private:
    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i] == name) return i;
        throw ConfigError("unknown output column '" + name + "'");
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

inline void emit(const RunConfig& r, const std::string& text, std::ostream& stdout_stream) {
    if (r.out.empty()) {
        stdout_stream << text;
        return;
    }
    std::ofstream f(r.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + r.out + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing '" + r.out + "'");
}

// Tracks the first failure so the process exit code reflects it.
struct RowStatus {
    int code = exit_ok;
    void fail(int c) {
        if (code == exit_ok) code = c;
    }
};

// ---------------------------------------------------------------------------
// Commands

inline const std::vector<std::string> sweep_columns = {
    "lambda", "v_asymptotic", "quad_error", "v_mc", "mc_stderr",
    "n_traj", "t_total", "dt", "seed", "status"};

inline const std::vector<std::string> variance_columns = {
    "lambda", "rate_asymptotic", "quad_error", "rate_mc", "mc_stderr",
    "n_traj", "t_total", "dt", "seed", "status"};

// Shared row loop of `sweep` and `variance`.
template <class Asymptotic, class MonteCarlo>
int run_lambda_table(const RunConfig& r, const std::vector<std::string>& columns,
                     Asymptotic&& asymptotic, MonteCarlo&& monte_carlo, std::ostream& out) {
    Table table(columns);
    table.check_columns(r.columns);
    RowStatus status;
    for (double lambda : r.lambdas) {
        const ReducedParams p = r.params.with_lambda(lambda);
        std::string state = "ok";
        std::string value = "", error = "", mc_value = "", mc_se = "";
        try {
            const QuadResult q = asymptotic(p);
            value = fmt_num(q.value);
            error = fmt_num(q.error);
        } catch (const AccuracyFailure& e) {
            value = fmt_num(e.best_estimate());
            error = fmt_num(e.error_estimate());
            state = "accuracy_failure";
            status.fail(exit_accuracy);
        }
        if (r.mc) {
            try {
                const RateEstimate m = monte_carlo(p);
                mc_value = fmt_num(m.rate);
                mc_se = fmt_num(m.stderr);
            } catch (const DivergenceError& e) {
                state = state == "ok" ? "divergence" : state + "+divergence";
                status.fail(exit_divergence);
            }
        }
        table.add_row({fmt_num(lambda), value, error, mc_value, mc_se,
                       r.mc ? std::to_string(r.sim.n_traj) : "",
                       r.mc ? fmt_num(r.sim.t_total) : "", r.mc ? fmt_num(r.sim.dt) : "",
                       r.mc ? std::to_string(r.sim.master_seed) : "", state});
    }
    std::ostringstream text;
    text << header_block(r);
    table.write(text, r.columns);
    emit(r, text.str(), out);
    return status.code;
}

/// Drift against lambda: asymptotic value plus optional Monte Carlo estimate.
inline int cmd_sweep(const RunConfig& r, std::ostream& out) {
    return run_lambda_table(
        r, sweep_columns,
        [&](const ReducedParams& p) {
            const DriftValue d = drift(r.model, p, r.wave, r.quad);
            return QuadResult{d.value, d.error};
        },
        [&](const ReducedParams& p) {
            const DriftEstimate e = estimate_drift(r.sim, p, r.wave);
            return RateEstimate{e.mean, e.stderr};
        },
        out);
}

/// Long-time variance rate of the eddy model against lambda.
inline int cmd_variance(const RunConfig& r, std::ostream& out) {
    return run_lambda_table(
        r, variance_columns,
        [&](const ReducedParams& p) { return variance_rate_eddy(p, r.wave, r.quad); },
        [&](const ReducedParams& p) { return estimate_variance_rate(r.sim, p, r.wave); }, out);
}

inline int cmd_peak(const RunConfig& r, std::ostream& out) {
    const DriftPeak peak = find_drift_peak(r.model, r.params, r.wave, r.lambda_lo, r.lambda_hi, r.quad);
    const double classical = drift_classical(r.params, r.wave).value;
    std::ostringstream text;
    text << header_block(r);
    text << "result = " << (peak.interior ? "interior peak" : "no interior peak") << "\n";
    text << "lambda_star = " << fmt_num(peak.lambda_star) << "\n";
    text << "v_star = " << fmt_num(peak.v_star) << "\n";
    text << "v_classical = " << fmt_num(classical) << "\n";
    emit(r, text.str(), out);
    return exit_ok;
}

inline const std::vector<std::string> sort_columns = {
    "species", "lambda", "predicted_vx", "predicted_vy", "mc_vx",
    "mc_vy", "stderr_x", "stderr_y", "cov_xy"};

inline int cmd_sort_demo(const RunConfig& r, std::ostream& out) {
    Table table(sort_columns);
    table.check_columns(r.columns);
    std::vector<Vec2> predicted;
    for (const auto& sp : r.species) predicted.push_back(predicted_drift_vector(sp, r.field, r.quad));
    const std::vector<VectorDriftEstimate> mc = simulate_sorting(r.species, r.field, r.sim);
    for (std::size_t i = 0; i < r.species.size(); ++i)
        table.add_row({r.species[i].label, fmt_num(r.species[i].params.lambda), fmt_num(predicted[i].x),
                       fmt_num(predicted[i].y), fmt_num(mc[i].mean.x), fmt_num(mc[i].mean.y),
                       fmt_num(mc[i].stderr.x), fmt_num(mc[i].stderr.y), fmt_num(mc[i].cov_xy)});

    std::ostringstream text;
    text << header_block(r);
    table.write(text, r.columns);
    if (r.species.size() > 1) {
        text << "# fanout angles (radians)\n";
        text << "# species_a,species_b,predicted_angle,mc_angle,mc_angle_stderr\n";
        auto angle_or_nan = [](Vec2 a, Vec2 b) {
            try {
                return fanout_angle(a, b);
            } catch (const UndefinedDirection&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        for (std::size_t i = 0; i < r.species.size(); ++i)
            for (std::size_t j = i + 1; j < r.species.size(); ++j) {
                double se = std::numeric_limits<double>::quiet_NaN();
                try {
                    se = fanout_angle_stderr(mc[i], mc[j]);
                } catch (const UndefinedDirection&) {
                }
                text << "# " << r.species[i].label << "," << r.species[j].label << ","
                     << fmt_num(angle_or_nan(predicted[i], predicted[j])) << ","
                     << fmt_num(angle_or_nan(mc[i].mean, mc[j].mean)) << "," << fmt_num(se) << "\n";
            }
    }
    emit(r, text.str(), out);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run_command(const std::string& command, const Config& c, unsigned workers,
                       std::ostream& out) {
    RunConfig r = resolve(command, c);
    r.sim.workers = workers;
    if (command == "sweep") return cmd_sweep(r, out);
    if (command == "variance") return cmd_variance(r, out);
    if (command == "peak") return cmd_peak(r, out);
    return cmd_sort_demo(r, out);
}

/// Full CLI; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Stochastic Stokes' drift: asymptotics, Monte Carlo and particle sorting"};
    app.require_subcommand(1);

    std::string config_path;
    unsigned workers = default_workers();
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--workers", workers, "parallel trajectory workers (env STOKESDRIFT_WORKERS)")
        ->check(CLI::PositiveNumber);

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"sweep", "drift against lambda (CSV)"},
        {"variance", "eddy variance rate against lambda (CSV)"},
        {"peak", "locate the maximum of the drift over lambda"},
        {"sort-demo", "two-wave, multi-species drift fanout (CSV)"},
    };
    std::map<std::string, std::map<std::string, std::string>> overrides;
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        subs.push_back(sub);
        for (const auto& key : known_keys()) {
            auto* store = &overrides[name][key.name];
            sub->add_option(std::string("--") + key.name, *store, key.help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_usage;
    }

    std::string command;
    for (CLI::App* sub : subs)
        if (sub->parsed()) command = sub->get_name();

    try {
        Config cfg(default_values(command));
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw IoError("cannot read config '" + config_path + "'");
            cfg.merge_file(in, command, known_key_names());
        }
        CLI::App* sub = app.get_subcommand(command);
        for (const auto& key : known_keys())
            if (sub->count(std::string("--") + key.name) > 0)
                cfg.set(key.name, overrides[command][key.name]);
        return run_command(command, cfg, workers, out);
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const AccuracyFailure& e) {
        err << "accuracy failure: " << e.what() << "\n";
        return exit_accuracy;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << "\n";
        return exit_divergence;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const InvalidParameter& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UndefinedDirection& e) {
        err << "error: " << e.what() << "\n";
        return exit_accuracy;
    }
}

}  // namespace stokesdrift::cli
