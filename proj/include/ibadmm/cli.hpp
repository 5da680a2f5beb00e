#ifndef IBADMM_CLI_HPP
#define IBADMM_CLI_HPP

// Command-line front end: solve, sweep, certificate and ba subcommands.
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ibadmm/certificate.hpp"
#include "ibadmm/harness.hpp"
#include "ibadmm/io.hpp"

namespace ibadmm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

namespace cli {

/// Raised for command lines that parse but are incomplete.
class UsageError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct SolverKnobs {
    double eps = AdmmConfig{}.eps_floor;
    double step = AdmmConfig{}.base_step;
    double z_step = AdmmConfig{}.z_step;
    int inner = AdmmConfig{}.inner_steps;
    double tol = AdmmConfig{}.residual_tol;
    long max_iters = AdmmConfig{}.max_outer_iters;
    double bayat_step = BayatConfig{}.base_step;
    double ba_tol = BaConfig{}.tol;
    long ba_max_iters = BaConfig{}.max_iters;

    void add_to(CLI::App* app) {
        app->add_option("--eps", eps, "Interior floor for iterates")->capture_default_str();
        app->add_option("--step", step, "ADMM encoder step")->capture_default_str();
        app->add_option("--z-step", z_step, "ADMM p_z step")->capture_default_str();
        app->add_option("--inner", inner, "Gradient steps per primal block")->capture_default_str();
        app->add_option("--tol", tol, "Residual tolerance (ADMM and Bayat)")->capture_default_str();
        app->add_option("--max-iters", max_iters, "Outer iteration cap (ADMM and Bayat)")->capture_default_str();
        app->add_option("--bayat-step", bayat_step, "Bayat primal step")->capture_default_str();
        app->add_option("--ba-tol", ba_tol, "BA encoder-change tolerance")->capture_default_str();
        app->add_option("--ba-max-iters", ba_max_iters, "BA iteration cap")->capture_default_str();
    }

    AdmmConfig admm() const {
        AdmmConfig c;
        c.eps_floor = eps;
        c.base_step = step;
        c.z_step = z_step;
        c.inner_steps = inner;
        c.residual_tol = tol;
        c.max_outer_iters = max_iters;
        return c;
    }

    BayatConfig bayat() const {
        BayatConfig c;
        c.eps_floor = eps;
        c.base_step = bayat_step;
        c.residual_tol = tol;
        c.decoder_tol = tol;
        c.max_outer_iters = max_iters;
        return c;
    }

    BaConfig ba() const {
        BaConfig c;
        c.eps_floor = eps;
        c.tol = ba_tol;
        c.max_iters = ba_max_iters;
        return c;
    }
};

inline std::vector<std::string> json_to_inputs(const Json& v, const std::string& key) {
    if (v.is_array()) {
        std::vector<std::string> out;
        for (const Json& e : v) {
            if (e.is_array() || e.is_object()) throw ConfigError("config key '" + key + "': nested values not allowed");
            out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        }
        return out;
    }
    if (v.is_object() || v.is_null()) throw ConfigError("config key '" + key + "': unsupported value");
    return {v.is_string() ? v.get<std::string>() : v.dump()};
}

/// Fills options that were not given on the command line from a JSON
/// object whose keys are long option names without the leading dashes.
inline void apply_json_config(CLI::App* app, const std::string& path) {
    const Json doc = read_json_file(path);
    if (!doc.is_object()) throw ConfigError(path + ": config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "config") throw ConfigError(path + ": config files cannot nest");
        CLI::Option* opt = app->get_option_no_throw("--" + key);
        if (opt == nullptr) throw ConfigError(path + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(json_to_inputs(value, key));
        try {
            opt->run_callback();
        } catch (const CLI::ParseError& e) {
            throw ConfigError(path + ": bad value for '" + key + "': " + e.what());
        }
    }
}

inline void open_out(std::ofstream& f, const std::string& path) {
    f.open(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write " + path);
}

inline void require_joint(const std::string& path) {
    if (path.empty()) throw UsageError("--joint is required");
}

}  // namespace cli

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Discrete information bottleneck solvers"};
    app.name("ibadmm");
    app.require_subcommand(1);

    // solve
    CLI::App* solve = app.add_subcommand("solve", "Single solver run; prints the run record as JSON");
    std::string s_joint, s_method = "admm", s_config, s_trace;
    double s_beta = 5.0, s_c = 32.0, s_omega = 4.0;
    std::uint64_t s_seed = 0;
    std::size_t s_nz = 0;
    long s_stride = 1;
    cli::SolverKnobs s_knobs;
    solve->add_option("--joint", s_joint, "Joint distribution JSON file");
    solve->add_option("--method", s_method, "admm, bayat or ba")->capture_default_str();
    solve->add_option("--beta", s_beta, "Trade-off parameter")->capture_default_str();
    solve->add_option("--c", s_c, "Penalty coefficient")->capture_default_str();
    solve->add_option("--omega", s_omega, "Bregman weight")->capture_default_str();
    solve->add_option("--seed", s_seed, "Initialization seed")->capture_default_str();
    solve->add_option("--nz", s_nz, "Number of clusters (0: N_x)")->capture_default_str();
    solve->add_option("--trace", s_trace, "Write the iteration trace as JSON lines");
    solve->add_option("--trace-stride", s_stride, "Record every n-th iteration")->capture_default_str();
    s_knobs.add_to(solve);
    solve->add_option("--config", s_config, "JSON file with option values");

    // sweep
    CLI::App* sweep = app.add_subcommand("sweep", "Multi-restart sweep; writes the results CSV");
    std::string w_joint, w_beta = "1:10:0.5", w_out, w_plot, w_trace, w_config, w_summary;
    std::vector<std::string> w_methods{"ba", "admm", "bayat"};
    std::vector<double> w_c{32.0};
    double w_omega = 4.0;
    int w_restarts = 100;
    std::uint64_t w_seed = 0;
    std::size_t w_nz = 0;
    long w_stride = 1;
    unsigned w_jobs = 0;
    bool w_no_timing = false;
    cli::SolverKnobs w_knobs;
    sweep->add_option("--joint", w_joint, "Joint distribution JSON file");
    sweep->add_option("--methods", w_methods, "Comma-separated subset of ba,admm,bayat")->delimiter(',');
    sweep->add_option("--beta", w_beta, "Grid start:stop:step or a single value")->capture_default_str();
    sweep->add_option("--c", w_c, "Comma-separated penalty coefficients")->delimiter(',');
    sweep->add_option("--omega", w_omega, "Bregman weight")->capture_default_str();
    sweep->add_option("--restarts", w_restarts, "Runs per (method, beta, c) cell")->capture_default_str();
    sweep->add_option("--seed", w_seed, "Base seed")->capture_default_str();
    sweep->add_option("--nz", w_nz, "Number of clusters (0: N_x)")->capture_default_str();
    sweep->add_option("--out", w_out, "Results CSV path");
    sweep->add_option("--plot", w_plot, "Information-plane CSV path");
    sweep->add_option("--summary", w_summary, "Per-cell summary JSON path");
    sweep->add_option("--trace-out", w_trace, "Trace archive (JSON lines) path");
    sweep->add_option("--trace-stride", w_stride, "Record every n-th iteration")->capture_default_str();
    sweep->add_option("--jobs", w_jobs, "Worker threads (0: all cores)")->capture_default_str();
    sweep->add_flag("--no-timing", w_no_timing, "Write cpu_ms as 0 for reproducible output");
    w_knobs.add_to(sweep);
    sweep->add_option("--config", w_config, "JSON file with option values");

    // certificate
    CLI::App* cert = app.add_subcommand("certificate", "Convergence certificate as JSON");
    std::string k_joint, k_config;
    double k_beta = 5.0, k_c = 32.0, k_omega = 4.0, k_eps = AdmmConfig{}.eps_floor;
    std::size_t k_points = 101;
    cert->add_option("--joint", k_joint, "Joint distribution JSON file");
    cert->add_option("--beta", k_beta, "Trade-off parameter")->capture_default_str();
    cert->add_option("--c", k_c, "Penalty coefficient")->capture_default_str();
    cert->add_option("--omega", k_omega, "Bregman weight")->capture_default_str();
    cert->add_option("--eps", k_eps, "Interior floor")->capture_default_str();
    cert->add_option("--alpha-points", k_points, "Alpha grid size on (0.005, 0.995)")->capture_default_str();
    cert->add_option("--config", k_config, "JSON file with option values");

    // ba
    CLI::App* ba = app.add_subcommand("ba", "Blahut-Arimoto restarts at one beta; prints a JSON summary");
    std::string b_joint, b_out, b_config;
    double b_beta = 5.0;
    int b_restarts = 100;
    std::uint64_t b_seed = 0;
    std::size_t b_nz = 0;
    bool b_no_timing = false;
    cli::SolverKnobs b_knobs;
    ba->add_option("--joint", b_joint, "Joint distribution JSON file");
    ba->add_option("--beta", b_beta, "Trade-off parameter")->capture_default_str();
    ba->add_option("--restarts", b_restarts, "Number of random starts")->capture_default_str();
    ba->add_option("--seed", b_seed, "Base seed")->capture_default_str();
    ba->add_option("--nz", b_nz, "Number of clusters (0: N_x)")->capture_default_str();
    ba->add_option("--out", b_out, "Results CSV path");
    ba->add_flag("--no-timing", b_no_timing, "Write cpu_ms as 0 for reproducible output");
    ba->add_option("--eps", b_knobs.eps, "Floor for the random initial encoder")->capture_default_str();
    ba->add_option("--tol", b_knobs.ba_tol, "Encoder-change tolerance")->capture_default_str();
    ba->add_option("--max-iters", b_knobs.ba_max_iters, "Iteration cap")->capture_default_str();
    ba->add_option("--config", b_config, "JSON file with option values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve) {
            if (!s_config.empty()) cli::apply_json_config(solve, s_config);
            cli::require_joint(s_joint);
            const JointXY joint = load_joint(s_joint);
            const Method m = parse_method(s_method);
            SweepSpec spec;
            spec.nz = s_nz;
            spec.omega = s_omega;
            spec.admm = s_knobs.admm();
            spec.bayat = s_knobs.bayat();
            spec.ba = s_knobs.ba();
            spec.trace.enabled = !s_trace.empty();
            spec.trace.stride = s_stride;
            if (s_stride < 1) throw ConfigError("trace stride must be >= 1");
            const TracedRun run = run_single(joint, spec, m, s_beta, s_c, s_seed);
            if (!run.record.error.empty()) throw ValidationError(run.record.error);
            if (!s_trace.empty()) {
                std::ofstream f;
                cli::open_out(f, s_trace);
                write_trace_jsonl(f, run.record, run.trace);
            }
            out << record_to_json(run.record).dump(2) << '\n';
        } else if (*sweep) {
            if (!w_config.empty()) cli::apply_json_config(sweep, w_config);
            cli::require_joint(w_joint);
            if (w_out.empty()) throw cli::UsageError("--out is required");
            const JointXY joint = load_joint(w_joint);
            SweepSpec spec;
            spec.methods.clear();
            for (const std::string& name : w_methods) spec.methods.push_back(parse_method(name));
            spec.beta_grid = parse_beta_grid(w_beta);
            spec.c_values = w_c;
            spec.omega = w_omega;
            spec.restarts = w_restarts;
            spec.base_seed = w_seed;
            spec.nz = w_nz;
            spec.admm = w_knobs.admm();
            spec.bayat = w_knobs.bayat();
            spec.ba = w_knobs.ba();
            spec.record_timing = !w_no_timing;
            spec.trace.enabled = !w_trace.empty();
            spec.trace.stride = w_stride;
            spec.jobs = w_jobs;
            const SweepResult result = run_sweep(joint, spec);
            {
                std::ofstream f;
                cli::open_out(f, w_out);
                write_results_csv(f, result.records);
            }
            if (!w_plot.empty()) {
                std::ofstream f;
                cli::open_out(f, w_plot);
                write_plot_csv(f, result.records);
            }
            if (!w_trace.empty()) {
                std::ofstream f;
                cli::open_out(f, w_trace);
                for (const TracedRun& r : result.traces) write_trace_jsonl(f, r.record, r.trace);
            }
            const std::vector<CellSummary> cells = aggregate(result.records);
            Json summary = Json::array();
            for (const CellSummary& s : cells) summary.push_back(summary_to_json(s));
            if (!w_summary.empty()) {
                std::ofstream f;
                cli::open_out(f, w_summary);
                f << summary.dump(2) << '\n';
            }
            std::size_t failed = 0;
            for (const RunRecord& r : result.records) failed += r.error.empty() ? 0 : 1;
            for (const CellSummary& s : cells) {
                out << s.method << " beta=" << format_double(s.beta) << " c=" << format_double(s.c)
                    << " converged=" << format_double(s.convergence_pct) << "%"
                    << " best_I_yz=" << format_double(s.best_i_yz) << '\n';
            }
            if (failed > 0) err << failed << " run(s) failed; see records with empty results\n";
        } else if (*cert) {
            if (!k_config.empty()) cli::apply_json_config(cert, k_config);
            cli::require_joint(k_joint);
            const JointXY joint = load_joint(k_joint);
            AdmmConfig cfg;
            cfg.params = {k_beta, k_c, k_omega};
            cfg.eps_floor = k_eps;
            out << certificate_to_json(compute_certificate(joint, cfg, alpha_grid(k_points))).dump(2) << '\n';
        } else if (*ba) {
            if (!b_config.empty()) cli::apply_json_config(ba, b_config);
            cli::require_joint(b_joint);
            const JointXY joint = load_joint(b_joint);
            SweepSpec spec;
            spec.methods = {Method::ba};
            spec.beta_grid = {b_beta};
            spec.c_values = {1.0};
            spec.omega = 0.0;
            spec.restarts = b_restarts;
            spec.base_seed = b_seed;
            spec.nz = b_nz;
            spec.ba = b_knobs.ba();
            spec.record_timing = !b_no_timing;
            const SweepResult result = run_sweep(joint, spec);
            if (!b_out.empty()) {
                std::ofstream f;
                cli::open_out(f, b_out);
                write_results_csv(f, result.records);
            }
            const RunRecord* best = nullptr;
            for (const RunRecord& r : result.records) {
                if (r.converged && (best == nullptr || r.i_yz > best->i_yz)) best = &r;
            }
            Json j = summary_to_json(aggregate(result.records).front());
            j.erase("c");
            j["I_xy"] = mutual_information_xy(joint);
            j["best"] = best ? record_to_json(*best) : Json(nullptr);
            out << j.dump(2) << '\n';
        }
    } catch (const cli::UsageError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace ibadmm

#endif  // IBADMM_CLI_HPP
