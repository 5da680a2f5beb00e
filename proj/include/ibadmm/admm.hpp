#ifndef IBADMM_ADMM_HPP
#define IBADMM_ADMM_HPP

// Two-block Bregman ADMM for the IB Lagrangian:
//
//   p_{z|x}^{k+1} = argmin_{J p = 1}  L_c(p_z^k, p_{z|x}, mu^k)
//   p_z^{k+1}     = argmin_{1^T p = 1} L_c(p_z, p_{z|x}^{k+1}, mu^k) + omega KL(p_z || p_z^k)
//   mu^{k+1}      = mu^k + c (p_z^{k+1} - B p_{z|x}^{k+1})
//
// Each argmin is approximated by projected gradient steps: the gradient is
// mean-subtracted per simplex block (so the step keeps every block on its
// simplex) and the step length is cut by a ratio test that keeps every
// entry >= eps_floor.

#include <cmath>
#include <cstdint>
#include <string>

#include "ibadmm/objective.hpp"
#include "ibadmm/simplex.hpp"
#include "ibadmm/trace.hpp"

namespace ibadmm {

struct AdmmConfig {
    ObjectiveParams params{};
    /// Interior floor: every iterate entry stays >= eps_floor.
    double eps_floor = 1e-4;
    /// Gradient step for the p_{z|x} block, before the ratio test.
    double base_step = 0.05;
    /// Gradient step for the p_z block; <= 0 means "same as base_step".
    /// Kept small so that inner_steps * z_step * c stays well below 1.
    double z_step = 1e-3;
    /// Gradient steps per primal block per outer iteration.
    int inner_steps = 100;
    double residual_tol = 2e-6;
    long max_outer_iters = 10000;

    double effective_z_step() const noexcept { return z_step > 0.0 ? z_step : base_step; }

    void validate(std::size_t nz) const {
        params.validate();
        if (!(eps_floor > 0.0) || !(eps_floor * static_cast<double>(nz) < 1.0)) {
            throw ConfigError("eps_floor must satisfy 0 < eps_floor * N_z < 1");
        }
        if (!(base_step > 0.0) || !std::isfinite(base_step)) throw ConfigError("base_step must be > 0");
        if (!std::isfinite(z_step)) throw ConfigError("z_step must be finite");
        if (inner_steps < 1) throw ConfigError("inner_steps must be >= 1");
        if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be > 0");
        if (max_outer_iters < 1) throw ConfigError("max_outer_iters must be >= 1");
    }
};

/// ||p_z - B p_{z|x}||_1^2, the stopping statistic.
inline double marginal_residual(const Vec& p_z, const EncoderMatrix& e, const Vec& px) {
    const double l1 = (p_z - e * px).lpNorm<1>();
    return l1 * l1;
}

/// `inner_steps` projected-gradient steps on the encoder block with p_z and
/// mu held at their current values.
inline EncoderMatrix primal_zx_update(const AdmmState& state, const JointXY& joint, const AdmmConfig& config) {
    AdmmState s = state;
    for (int it = 0; it < config.inner_steps; ++it) {
        const EncoderMatrix g = grad_augmented_zx(s, joint, config.params);
        for (Eigen::Index x = 0; x < s.encoder.cols(); ++x) {
            auto col = s.encoder.col(x);
            const Vec dir = face_descent_direction(col, g.col(x), config.eps_floor);
            const double t = feasible_step(col, dir, config.base_step, config.eps_floor);
            col += t * dir;
        }
    }
    return std::move(s.encoder);
}

/// `inner_steps` projected-gradient steps on the p_z block. The Bregman
/// anchor is `state.p_z_prev`; callers set it to p_z^k before the block.
inline Vec primal_z_update(const AdmmState& state, const JointXY& joint, const AdmmConfig& config) {
    AdmmState s = state;
    const double step = config.effective_z_step();
    for (int it = 0; it < config.inner_steps; ++it) {
        const Vec dir = face_descent_direction(s.p_z, grad_augmented_z(s, joint, config.params), config.eps_floor);
        const double t = feasible_step(s.p_z, dir, step, config.eps_floor);
        s.p_z += t * dir;
    }
    return std::move(s.p_z);
}

/// mu + c (p_z - B p_{z|x}).
inline Vec dual_update(const AdmmState& state, const JointXY& joint, const AdmmConfig& config) {
    return state.mu_z + config.params.c * (state.p_z - state.encoder * joint.px().values());
}

struct AdmmResult {
    RunRecord record;
    AdmmState state;
    IterationTrace trace;
};

namespace detail {

inline void record_trace_point(IterationTrace& trace, const TraceOptions& opts, long k, double residual,
                               const AdmmState& s, const JointXY& joint, const ObjectiveParams& params) {
    TracePoint pt;
    pt.iteration = k;
    pt.residual = residual;
    pt.lagrangian = augmented_lagrangian(s, joint, params);
    pt.i_xz = mutual_information_xz(joint, s.encoder);
    pt.i_yz = mutual_information_yz(joint, s.encoder);
    if (opts.snapshots) {
        pt.p_z = s.p_z;
        pt.mu_z = s.mu_z;
    }
    trace.points.push_back(std::move(pt));
}

inline void finish_record(RunRecord& rec, const JointXY& joint, const EncoderMatrix& e, double residual,
                          const Stopwatch& clock) {
    rec.residual = residual;
    rec.i_xz = mutual_information_xz(joint, e);
    rec.i_yz = mutual_information_yz(joint, e);
    rec.cpu_ms = clock.elapsed_ms();
}

}  // namespace detail

/// Runs from the given initial point (clamped into the eps-interior).
inline AdmmResult admm_solve(const JointXY& joint, const EncoderMatrix& init_encoder, const Vec& init_pz,
                             const AdmmConfig& config, std::uint64_t seed = 0, const TraceOptions& trace_opts = {}) {
    const Stopwatch clock;
    check_dims(joint, init_encoder);
    if (init_pz.size() != init_encoder.rows()) throw DimensionError("admm_solve: p_z length differs from N_z");
    config.validate(static_cast<std::size_t>(init_pz.size()));
    detail::check_column_stochastic(init_encoder, "admm_solve init encoder");
    detail::check_simplex(init_pz, "admm_solve init p_z");

    AdmmResult out;
    AdmmState& s = out.state;
    s.encoder = init_encoder;
    for (Eigen::Index x = 0; x < s.encoder.cols(); ++x) {
        Vec col = s.encoder.col(x);
        clamp_to_interior(col, config.eps_floor);
        s.encoder.col(x) = col;
    }
    s.p_z = init_pz;
    clamp_to_interior(s.p_z, config.eps_floor);
    s.p_z_prev = s.p_z;
    s.mu_z = Vec::Zero(s.p_z.size());

    const Vec& px = joint.px().values();
    RunRecord& rec = out.record;
    rec.method = "admm";
    rec.beta = config.params.beta;
    rec.c = config.params.c;
    rec.omega = config.params.omega;
    rec.seed = seed;

    double residual = marginal_residual(s.p_z, s.encoder, px);
    for (long k = 1; k <= config.max_outer_iters; ++k) {
        s.encoder = primal_zx_update(s, joint, config);
        s.p_z_prev = s.p_z;
        s.p_z = primal_z_update(s, joint, config);
        s.mu_z = dual_update(s, joint, config);

        residual = marginal_residual(s.p_z, s.encoder, px);
        rec.iterations = k;
        const bool done = residual < config.residual_tol;
        if (trace_opts.enabled && (done || k == config.max_outer_iters || (k - 1) % trace_opts.stride == 0)) {
            detail::record_trace_point(out.trace, trace_opts, k, residual, s, joint, config.params);
        }
        if (done) {
            rec.converged = true;
            break;
        }
    }
    detail::finish_record(rec, joint, s.encoder, residual, clock);
    return out;
}

/// Random start: encoder rows and p_z uniform on the simplex, mu = 0.
inline AdmmResult admm_solve(const JointXY& joint, std::size_t nz, const AdmmConfig& config, std::uint64_t seed,
                             const TraceOptions& trace_opts = {}) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(nz);
    const EncoderMatrix e = random_encoder(rng, n, static_cast<Eigen::Index>(joint.nx()), config.eps_floor);
    const Vec pz = random_simplex_point(rng, n, config.eps_floor);
    return admm_solve(joint, e, pz, config, seed, trace_opts);
}

}  // namespace ibadmm

#endif  // IBADMM_ADMM_HPP
