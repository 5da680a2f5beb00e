#ifndef IBADMM_TRACE_HPP
#define IBADMM_TRACE_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ibadmm/prob.hpp"

namespace ibadmm {

/// Outcome of one solver run; one CSV row of a sweep.
struct RunRecord {
    std::string method;
    double beta = 0.0;
    double c = 0.0;
    double omega = 0.0;
    std::uint64_t seed = 0;
    bool converged = false;
    long iterations = 0;
    double i_xz = 0.0;
    double i_yz = 0.0;
    double residual = 0.0;
    double cpu_ms = 0.0;
    /// Set when the solver threw; the run still produces a record.
    std::string error;
};

struct TraceOptions {
    bool enabled = false;
    /// Record every `stride`-th outer iteration (the final one is always kept).
    long stride = 1;
    /// Keep p_z and mu_z snapshots (needed for Lyapunov evaluation).
    bool snapshots = true;
};

struct TracePoint {
    long iteration = 0;
    double residual = 0.0;
    double lagrangian = 0.0;
    double i_xz = 0.0;
    double i_yz = 0.0;
    std::optional<Vec> p_z;
    std::optional<Vec> mu_z;
};

struct IterationTrace {
    std::vector<TracePoint> points;

    bool empty() const noexcept { return points.empty(); }
    std::size_t size() const noexcept { return points.size(); }
};

/// Wall-clock stopwatch for per-run timing.
class Stopwatch {
 public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

 private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace ibadmm

#endif  // IBADMM_TRACE_HPP
