#ifndef IBADMM_BAYAT_HPP
#define IBADMM_BAYAT_HPP

// Three-block ADMM baseline. Besides p_z, the decoder p(z|y) is an
// augmented variable Q tied to the encoder by N_y extra penalties:
//
//   L = F_beta(p_z) + sum_x p(x) sum_z p(z|x) log p(z|x)
//       - beta sum_y p(y) sum_z Q(z,y) log Q(z,y)
//       + mu_z^T r + c/2 ||r||^2 + <M, R> + c/2 ||R||_F^2
//
//   r = p_z - B p_{z|x},   R = Q - p_{z|x} p(x|y)   (N_z x N_y).
//
// One outer iteration takes a single projected-gradient step on the encoder,
// then p_z, then Q, followed by both dual ascent steps.

#include <cmath>
#include <cstdint>

#include "ibadmm/admm.hpp"
#include "ibadmm/objective.hpp"
#include "ibadmm/simplex.hpp"
#include "ibadmm/trace.hpp"

namespace ibadmm {

struct BayatConfig {
    /// omega is ignored: this baseline has no Bregman term.
    ObjectiveParams params{};
    double eps_floor = 1e-4;
    /// Gradient step shared by the three primal blocks. 0.05 diverges at large c.
    double base_step = 0.01;
    double residual_tol = 2e-6;
    double decoder_tol = 2e-6;
    long max_outer_iters = 10000;

    void validate(std::size_t nz) const {
        params.validate();
        if (!(eps_floor > 0.0) || !(eps_floor * static_cast<double>(nz) < 1.0)) {
            throw ConfigError("eps_floor must satisfy 0 < eps_floor * N_z < 1");
        }
        if (!(base_step > 0.0) || !std::isfinite(base_step)) throw ConfigError("base_step must be > 0");
        if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be > 0");
        if (!(decoder_tol > 0.0)) throw ConfigError("decoder_tol must be > 0");
        if (max_outer_iters < 1) throw ConfigError("max_outer_iters must be >= 1");
    }
};

struct BayatState {
    EncoderMatrix encoder;
    Vec p_z;
    /// N_z x N_y, column-stochastic.
    Mat p_z_given_y;
    Vec mu_z;
    /// Same shape as p_z_given_y.
    Mat mu_zy;

    void validate() const {
        detail::check_column_stochastic(encoder, "BayatState encoder");
        detail::check_simplex(p_z, "BayatState p_z");
        detail::check_column_stochastic(p_z_given_y, "BayatState p_z_given_y");
        const auto nz = encoder.rows();
        if (p_z.size() != nz || p_z_given_y.rows() != nz || mu_z.size() != nz || mu_zy.rows() != nz ||
            mu_zy.cols() != p_z_given_y.cols()) {
            throw DimensionError("BayatState: inconsistent shapes");
        }
        if (!mu_z.allFinite() || !mu_zy.allFinite()) throw ValidationError("BayatState: duals not finite");
    }
};

/// Q - p_{z|x} p(x|y).
inline Mat decoder_residual(const BayatState& s, const JointXY& joint) {
    return s.p_z_given_y - markov_decoder(joint, s.encoder);
}

/// max_{z,y} |Q(z,y) - D(z,y) / sum_z' D(z',y)| with D = p_{z|x} p(x|y).
inline double decoder_deviation(const BayatState& s, const JointXY& joint) {
    const Mat d = markov_decoder(joint, s.encoder);
    double worst = 0.0;
    for (Eigen::Index y = 0; y < d.cols(); ++y) {
        const double norm = d.col(y).sum();
        for (Eigen::Index z = 0; z < d.rows(); ++z) {
            worst = std::max(worst, std::abs(s.p_z_given_y(z, y) - d(z, y) / norm));
        }
    }
    return worst;
}

namespace detail {

template <typename Derived>
void descend_columns(Eigen::MatrixBase<Derived>& point, const Mat& grad, double step, double eps_floor) {
    for (Eigen::Index k = 0; k < point.cols(); ++k) {
        auto col = point.col(k);
        const Vec dir = face_descent_direction(col, grad.col(k), eps_floor);
        col += feasible_step(col, dir, step, eps_floor) * dir;
    }
}

}  // namespace detail

inline BayatState bayat_step(const BayatState& state, const JointXY& joint, const BayatConfig& config) {
    const double beta = config.params.beta;
    const double c = config.params.c;
    const Vec& px = joint.px().values();
    const Mat& x_given_y = joint.x_given_y();
    BayatState s = state;

    {
        detail::require_positive(s.encoder.reshaped(), "bayat encoder");
        const Vec pull = s.mu_z + c * (s.p_z - s.encoder * px);
        const Mat dec_pull = s.mu_zy + c * decoder_residual(s, joint);
        Mat g = (s.encoder.array().log() + 1.0).matrix() * px.asDiagonal();
        g.noalias() -= pull * px.transpose();
        g.noalias() -= dec_pull * x_given_y.transpose();
        detail::descend_columns(s.encoder, g, config.base_step, config.eps_floor);
    }
    {
        const Vec g = grad_f(s.p_z, config.params) + s.mu_z + c * (s.p_z - s.encoder * px);
        const Vec dir = face_descent_direction(s.p_z, g, config.eps_floor);
        s.p_z += feasible_step(s.p_z, dir, config.base_step, config.eps_floor) * dir;
    }
    {
        detail::require_positive(s.p_z_given_y.reshaped(), "bayat decoder");
        Mat g = -beta * (s.p_z_given_y.array().log() + 1.0).matrix() * joint.py().asDiagonal();
        g += s.mu_zy + c * decoder_residual(s, joint);
        detail::descend_columns(s.p_z_given_y, g, config.base_step, config.eps_floor);
    }
    s.mu_z += c * (s.p_z - s.encoder * px);
    s.mu_zy += c * decoder_residual(s, joint);
    return s;
}

struct BayatResult {
    RunRecord record;
    BayatState state;
    IterationTrace trace;
};

/// Runs from the given primal point (clamped into the eps-interior) with
/// zero duals. The record's residual is the larger of the two stopping
/// statistics, so a converged record always has residual below both tolerances.
inline BayatResult bayat_solve(const JointXY& joint, const EncoderMatrix& init_encoder, const Vec& init_pz,
                               const Mat& init_decoder, const BayatConfig& config, std::uint64_t seed = 0,
                               const TraceOptions& trace_opts = {}) {
    const Stopwatch clock;
    check_dims(joint, init_encoder);
    const auto nz = init_encoder.rows();
    if (init_pz.size() != nz || init_decoder.rows() != nz ||
        init_decoder.cols() != static_cast<Eigen::Index>(joint.ny())) {
        throw DimensionError("bayat_solve: initial shapes disagree");
    }
    config.validate(static_cast<std::size_t>(nz));
    detail::check_column_stochastic(init_encoder, "bayat_solve init encoder");
    detail::check_simplex(init_pz, "bayat_solve init p_z");
    detail::check_column_stochastic(init_decoder, "bayat_solve init decoder");

    BayatResult out;
    BayatState& s = out.state;
    s.encoder = init_encoder;
    s.p_z = init_pz;
    s.p_z_given_y = init_decoder;
    for (Eigen::Index x = 0; x < s.encoder.cols(); ++x) {
        Vec col = s.encoder.col(x);
        clamp_to_interior(col, config.eps_floor);
        s.encoder.col(x) = col;
    }
    for (Eigen::Index y = 0; y < s.p_z_given_y.cols(); ++y) {
        Vec col = s.p_z_given_y.col(y);
        clamp_to_interior(col, config.eps_floor);
        s.p_z_given_y.col(y) = col;
    }
    clamp_to_interior(s.p_z, config.eps_floor);
    s.mu_z = Vec::Zero(nz);
    s.mu_zy = Mat::Zero(nz, s.p_z_given_y.cols());

    const Vec& px = joint.px().values();
    RunRecord& rec = out.record;
    rec.method = "bayat";
    rec.beta = config.params.beta;
    rec.c = config.params.c;
    rec.omega = config.params.omega;
    rec.seed = seed;

    double marginal = marginal_residual(s.p_z, s.encoder, px);
    double decoder = decoder_deviation(s, joint);
    for (long k = 1; k <= config.max_outer_iters; ++k) {
        s = bayat_step(s, joint, config);
        marginal = marginal_residual(s.p_z, s.encoder, px);
        decoder = decoder_deviation(s, joint);
        rec.iterations = k;
        const bool done = marginal < config.residual_tol && decoder < config.decoder_tol;
        if (trace_opts.enabled && (done || k == config.max_outer_iters || (k - 1) % trace_opts.stride == 0)) {
            TracePoint pt;
            pt.iteration = k;
            pt.residual = marginal;
            pt.lagrangian = std::nan("");
            pt.i_xz = mutual_information_xz(joint, s.encoder);
            pt.i_yz = mutual_information_yz(joint, s.encoder);
            if (trace_opts.snapshots) {
                pt.p_z = s.p_z;
                pt.mu_z = s.mu_z;
            }
            out.trace.points.push_back(std::move(pt));
        }
        if (done) {
            rec.converged = true;
            break;
        }
    }
    detail::finish_record(rec, joint, s.encoder, std::max(marginal, decoder), clock);
    return out;
}

/// Random start: encoder rows, p_z and decoder columns uniform on the simplex.
inline BayatResult bayat_solve(const JointXY& joint, std::size_t nz, const BayatConfig& config, std::uint64_t seed,
                               const TraceOptions& trace_opts = {}) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(nz);
    const EncoderMatrix e = random_encoder(rng, n, static_cast<Eigen::Index>(joint.nx()), config.eps_floor);
    const Vec pz = random_simplex_point(rng, n, config.eps_floor);
    Mat dec(n, static_cast<Eigen::Index>(joint.ny()));
    for (Eigen::Index y = 0; y < dec.cols(); ++y) dec.col(y) = random_simplex_point(rng, n, config.eps_floor);
    return bayat_solve(joint, e, pz, dec, config, seed, trace_opts);
}

}  // namespace ibadmm

#endif  // IBADMM_BAYAT_HPP
