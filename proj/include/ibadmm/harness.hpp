#ifndef IBADMM_HARNESS_HPP
#define IBADMM_HARNESS_HPP

// Multi-restart sweeps over (method, beta, c), aggregation, and the CSV
// outputs. Every run is independent; records are sorted after collection,
// so the output does not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ibadmm/admm.hpp"
#include "ibadmm/ba.hpp"
#include "ibadmm/bayat.hpp"
#include "ibadmm/io.hpp"

namespace ibadmm {

enum class Method { ba = 0, admm = 1, bayat = 2 };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::ba: return "ba";
        case Method::admm: return "admm";
        case Method::bayat: return "bayat";
    }
    return "?";
}

inline Method parse_method(const std::string& name) {
    if (name == "ba") return Method::ba;
    if (name == "admm") return Method::admm;
    if (name == "bayat") return Method::bayat;
    throw ConfigError("unknown method '" + name + "' (expected ba, admm or bayat)");
}

/// Parses "start:stop:step" (both ends included when step divides the
/// range) or a single value. Points are start + i * step, so they do not
/// accumulate rounding error.
inline std::vector<double> parse_beta_grid(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("beta grid '" + text + "': '" + tok + "' is not a number");
        }
        if (used != tok.size() || !std::isfinite(v)) {
            throw ConfigError("beta grid '" + text + "': '" + tok + "' is not a number");
        }
        parts.push_back(v);
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw ConfigError("beta grid must be 'start:stop:step' or a single value");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0)) throw ConfigError("beta grid step must be > 0");
    if (stop < start) throw ConfigError("beta grid stop must be >= start");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

struct SweepSpec {
    std::vector<Method> methods{Method::ba, Method::admm, Method::bayat};
    std::vector<double> beta_grid = parse_beta_grid("1:10:0.5");
    std::vector<double> c_values{32.0};
    double omega = 4.0;
    int restarts = 100;
    std::uint64_t base_seed = 0;
    /// Cluster count; 0 means N_x.
    std::size_t nz = 0;
    /// Templates; beta, c and omega are overwritten per cell.
    AdmmConfig admm{};
    BayatConfig bayat{};
    BaConfig ba{};
    /// When false every cpu_ms is written as 0, making the CSV reproducible byte for byte.
    bool record_timing = true;
    TraceOptions trace{};
    /// Worker threads; 0 means hardware concurrency.
    unsigned jobs = 0;

    void validate() const {
        if (methods.empty()) throw ConfigError("sweep needs at least one method");
        if (beta_grid.empty()) throw ConfigError("beta grid is empty");
        if (!std::is_sorted(beta_grid.begin(), beta_grid.end())) throw ConfigError("beta grid must be sorted");
        for (double b : beta_grid) {
            if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("beta values must be finite and >= 0");
        }
        if (c_values.empty()) throw ConfigError("no penalty values given");
        for (double c : c_values) {
            if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("penalty values must be > 0");
        }
        if (!(omega >= 0.0) || !std::isfinite(omega)) throw ConfigError("omega must be >= 0");
        if (restarts < 1) throw ConfigError("restarts must be >= 1");
        if (trace.stride < 1) throw ConfigError("trace stride must be >= 1");
    }
};

/// Seed of one run, a mix of the cell indices. Independent of which other
/// methods or cells the sweep contains.
inline std::uint64_t run_seed(std::uint64_t base_seed, Method m, std::size_t beta_index, std::size_t c_index,
                              std::size_t restart) {
    std::uint64_t h = mix64(base_seed);
    h = combine_seed(h, static_cast<std::uint64_t>(m));
    h = combine_seed(h, beta_index);
    h = combine_seed(h, c_index);
    return combine_seed(h, restart);
}

struct TracedRun {
    RunRecord record;
    IterationTrace trace;
};

struct SweepResult {
    std::vector<RunRecord> records;
    /// Only filled when spec.trace.enabled; same order as records.
    std::vector<TracedRun> traces;
};

inline bool record_less(const RunRecord& a, const RunRecord& b) {
    return std::tie(a.method, a.beta, a.c, a.seed) < std::tie(b.method, b.beta, b.c, b.seed);
}

/// Runs one cell restart. Solver failures become records with `error` set.
inline TracedRun run_single(const JointXY& joint, const SweepSpec& spec, Method m, double beta, double c,
                            std::uint64_t seed) {
    const std::size_t nz = spec.nz > 0 ? spec.nz : joint.nx();
    TracedRun out;
    try {
        switch (m) {
            case Method::ba: {
                BaConfig cfg = spec.ba;
                cfg.beta = beta;
                out.record = ba_solve(joint, nz, cfg, seed).record;
                break;
            }
            case Method::admm: {
                AdmmConfig cfg = spec.admm;
                cfg.params = {beta, c, spec.omega};
                AdmmResult r = admm_solve(joint, nz, cfg, seed, spec.trace);
                out.record = std::move(r.record);
                out.trace = std::move(r.trace);
                break;
            }
            case Method::bayat: {
                BayatConfig cfg = spec.bayat;
                cfg.params = {beta, c, spec.omega};
                BayatResult r = bayat_solve(joint, nz, cfg, seed, spec.trace);
                out.record = std::move(r.record);
                out.trace = std::move(r.trace);
                break;
            }
        }
    } catch (const Error& e) {
        out.record = RunRecord{};
        out.record.error = e.what();
    }
    out.record.method = method_name(m);
    out.record.beta = beta;
    out.record.c = c;
    out.record.omega = spec.omega;
    out.record.seed = seed;
    if (!spec.record_timing) out.record.cpu_ms = 0.0;
    return out;
}

inline SweepResult run_sweep(const JointXY& joint, const SweepSpec& spec) {
    spec.validate();
    struct Task {
        Method m;
        double beta;
        double c;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Method m : spec.methods) {
        for (std::size_t bi = 0; bi < spec.beta_grid.size(); ++bi) {
            for (std::size_t ci = 0; ci < spec.c_values.size(); ++ci) {
                for (int r = 0; r < spec.restarts; ++r) {
                    tasks.push_back({m, spec.beta_grid[bi], spec.c_values[ci],
                                     run_seed(spec.base_seed, m, bi, ci, static_cast<std::size_t>(r))});
                }
            }
        }
    }

    std::vector<TracedRun> runs(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            runs[i] = run_single(joint, spec, t.m, t.beta, t.c, t.seed);
            if (!spec.trace.enabled) runs[i].trace = {};
        }
    };
    unsigned n_workers = spec.jobs > 0 ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, std::max<std::size_t>(tasks.size(), 1)));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::stable_sort(runs.begin(), runs.end(),
                     [](const TracedRun& a, const TracedRun& b) { return record_less(a.record, b.record); });
    SweepResult out;
    out.records.reserve(runs.size());
    for (const TracedRun& r : runs) out.records.push_back(r.record);
    if (spec.trace.enabled) out.traces = std::move(runs);
    return out;
}

struct ParetoPoint {
    double i_xz = 0.0;
    double i_yz = 0.0;
};

struct CellSummary {
    std::string method;
    double beta = 0.0;
    double c = 0.0;
    std::size_t runs = 0;
    std::size_t converged = 0;
    double convergence_pct = 0.0;
    /// Over all runs, divergent ones included.
    double mean_cpu_ms = 0.0;
    /// Best I(Y;Z) among converged runs; NaN when none converged.
    double best_i_yz = std::nan("");
    /// Converged points with the largest I(Y;Z) in each 0.01-nat I(X;Z) bin.
    std::vector<ParetoPoint> pareto_points;
};

inline constexpr double kParetoBin = 0.01;

inline std::vector<CellSummary> aggregate(const std::vector<RunRecord>& records) {
    if (records.empty()) throw ValidationError("aggregate: no records");
    using Key = std::tuple<std::string, double, double>;
    std::map<Key, std::vector<const RunRecord*>> cells;
    for (const RunRecord& r : records) cells[{r.method, r.beta, r.c}].push_back(&r);

    std::vector<CellSummary> out;
    out.reserve(cells.size());
    // Summation order follows the record contents, not the input order, so the
    // floating-point means are exactly permutation invariant.
    const auto content = [](const RunRecord* r) {
        return std::tie(r->seed, r->cpu_ms, r->i_xz, r->i_yz, r->residual, r->iterations, r->converged);
    };
    for (auto& [key, rs] : cells) {
        std::sort(rs.begin(), rs.end(), [&](const RunRecord* a, const RunRecord* b) { return content(a) < content(b); });
        CellSummary s;
        std::tie(s.method, s.beta, s.c) = key;
        s.runs = rs.size();
        double cpu = 0.0;
        std::map<long, ParetoPoint> bins;
        for (const RunRecord* r : rs) {
            cpu += r->cpu_ms;
            if (!r->converged) continue;
            ++s.converged;
            if (std::isnan(s.best_i_yz) || r->i_yz > s.best_i_yz) s.best_i_yz = r->i_yz;
            const auto bin = static_cast<long>(std::floor(r->i_xz / kParetoBin));
            auto it = bins.find(bin);
            const ParetoPoint p{r->i_xz, r->i_yz};
            if (it == bins.end()) {
                bins.emplace(bin, p);
            } else if (p.i_yz > it->second.i_yz || (p.i_yz == it->second.i_yz && p.i_xz < it->second.i_xz)) {
                it->second = p;
            }
        }
        s.convergence_pct = 100.0 * static_cast<double>(s.converged) / static_cast<double>(s.runs);
        s.mean_cpu_ms = cpu / static_cast<double>(s.runs);
        for (const auto& [bin, p] : bins) s.pareto_points.push_back(p);
        out.push_back(std::move(s));
    }
    return out;
}

inline constexpr const char* kResultsHeader = "method,beta,c,omega,seed,converged,iterations,I_xz,I_yz,residual,cpu_ms";

inline void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << kResultsHeader << '\n';
    for (const RunRecord& r : records) {
        out << r.method << ',' << format_double(r.beta) << ',' << format_double(r.c) << ',' << format_double(r.omega)
            << ',' << r.seed << ',' << (r.converged ? "true" : "false") << ',' << r.iterations << ','
            << format_double(r.i_xz) << ',' << format_double(r.i_yz) << ',' << format_double(r.residual) << ','
            << format_double(r.cpu_ms) << '\n';
    }
}

/// Information-plane points of the converged runs.
inline void write_plot_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << "method,beta,I_xz,I_yz\n";
    for (const RunRecord& r : records) {
        if (!r.converged) continue;
        out << r.method << ',' << format_double(r.beta) << ',' << format_double(r.i_xz) << ','
            << format_double(r.i_yz) << '\n';
    }
}

inline Json summary_to_json(const CellSummary& s) {
    Json pts = Json::array();
    for (const ParetoPoint& p : s.pareto_points) pts.push_back({{"I_xz", p.i_xz}, {"I_yz", p.i_yz}});
    return Json{{"method", s.method},
                {"beta", s.beta},
                {"c", s.c},
                {"runs", s.runs},
                {"converged", s.converged},
                {"convergence_pct", s.convergence_pct},
                {"mean_cpu_ms", s.mean_cpu_ms},
                {"best_I_yz", std::isnan(s.best_i_yz) ? Json(nullptr) : Json(s.best_i_yz)},
                {"pareto_points", std::move(pts)}};
}

}  // namespace ibadmm

#endif  // IBADMM_HARNESS_HPP
