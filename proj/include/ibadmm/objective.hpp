#ifndef IBADMM_OBJECTIVE_HPP
#define IBADMM_OBJECTIVE_HPP

// The split IB objective
//
//   I(X;Z) - beta I(Y;Z) = F_beta(p_z) + G_beta(p_{z|x})
//   F_beta(p_z)     = (beta - 1) sum_z p(z) log p(z)
//   G_beta(p_{z|x}) = sum_x p(x) sum_z p(z|x) log p(z|x)
//                     - beta sum_y p(y) sum_z p(z|y) log p(z|y)
//
// and the augmented Lagrangian
//
//   L_c = F_beta + G_beta + mu^T (p_z - B p_{z|x}) + c/2 ||p_z - B p_{z|x}||^2.
//
// The simplex multipliers of the full Lagrangian are never formed: every
// iterate is kept on the simplex, so those terms vanish identically.
//
// The functions here accept arbitrary positive vectors (not only simplex
// points) so they can be probed with finite differences.

#include <cmath>
#include <string>

#include "ibadmm/prob.hpp"

namespace ibadmm {

struct ObjectiveParams {
    double beta = 1.0;
    double c = 1.0;
    double omega = 0.0;

    void validate() const {
        if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be >= 0");
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("penalty c must be > 0");
        if (!(omega >= 0.0) || !std::isfinite(omega)) throw ConfigError("omega must be >= 0");
    }
};

/// Primal/dual iterate of the two-block solver. `p_z_prev` anchors the
/// Bregman term of the p_z block.
struct AdmmState {
    Vec p_z;
    EncoderMatrix encoder;
    Vec mu_z;
    Vec p_z_prev;

    void validate() const {
        detail::check_simplex(p_z, "AdmmState p_z");
        detail::check_simplex(p_z_prev, "AdmmState p_z_prev");
        detail::check_column_stochastic(encoder, "AdmmState encoder");
        if (mu_z.size() != p_z.size() || p_z_prev.size() != p_z.size() || encoder.rows() != p_z.size()) {
            throw DimensionError("AdmmState: inconsistent N_z");
        }
        if (!mu_z.allFinite()) throw ValidationError("AdmmState: mu_z not finite");
    }
};

namespace detail {

template <typename Derived>
void require_positive(const Eigen::MatrixBase<Derived>& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v(i) > 0.0)) {
            throw GradientSingularityError(std::string(what) + ": zero probability at index " + std::to_string(i));
        }
    }
}

}  // namespace detail

inline double f_beta(const Vec& p_z, const ObjectiveParams& params) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p_z.size(); ++i) s += detail::xlogx(p_z(i));
    return (params.beta - 1.0) * s;
}

inline double g_beta(const JointXY& joint, const EncoderMatrix& e, const ObjectiveParams& params) {
    const Vec& px = joint.px().values();
    const Vec& py = joint.py();
    const Mat dec = markov_decoder(joint, e);
    double sx = 0.0;
    for (Eigen::Index x = 0; x < e.cols(); ++x) {
        double s = 0.0;
        for (Eigen::Index z = 0; z < e.rows(); ++z) s += detail::xlogx(e(z, x));
        sx += px(x) * s;
    }
    double sy = 0.0;
    for (Eigen::Index y = 0; y < dec.cols(); ++y) {
        double s = 0.0;
        for (Eigen::Index z = 0; z < dec.rows(); ++z) s += detail::xlogx(dec(z, y));
        sy += py(y) * s;
    }
    return sx - params.beta * sy;
}

/// (beta - 1)(log p_z + 1), componentwise.
inline Vec grad_f(const Vec& p_z, const ObjectiveParams& params) {
    detail::require_positive(p_z, "grad_f");
    return (params.beta - 1.0) * (p_z.array().log() + 1.0).matrix();
}

/// Component (x_i, z_j) = p(x_i)[log p(z_j|x_i) + 1]
///                        - beta sum_y p(x_i, y)[log p(z_j|y) + 1],
/// returned in encoder shape (the raw storage is the cascade order).
inline EncoderMatrix grad_g(const JointXY& joint, const EncoderMatrix& e, const ObjectiveParams& params) {
    detail::require_positive(e.reshaped(), "grad_g encoder");
    const Mat dec = markov_decoder(joint, e);
    detail::require_positive(dec.reshaped(), "grad_g decoder");
    const Vec& px = joint.px().values();
    EncoderMatrix g = (e.array().log() + 1.0).matrix() * px.asDiagonal();
    g.noalias() -= params.beta * (dec.array().log() + 1.0).matrix() * joint.joint();
    return g;
}

/// Bregman divergence generated by phi(u) = sum u log u:
///   phi(u) - phi(v) - <grad phi(v), u - v> = sum u log(u/v) - u + v.
/// Equals KL(u||v) on the simplex and has gradient log u - log v in u.
inline double bregman_divergence(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw DimensionError("bregman_divergence: length mismatch");
    double d = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u(i) > 0.0) {
            if (!(v(i) > 0.0)) throw InfiniteDivergenceError("bregman_divergence: v has a zero where u does not");
            d += u(i) * std::log(u(i) / v(i));
        }
        d += v(i) - u(i);
    }
    return d;
}

/// omega * KL(p||q).
inline double bregman_kl(const ProbVector& p, const ProbVector& q, double omega) {
    if (omega == 0.0) return 0.0;
    return omega * kl_divergence(p, q);
}

inline double augmented_lagrangian(const AdmmState& s, const JointXY& joint, const ObjectiveParams& params) {
    check_dims(joint, s.encoder);
    const Vec r = s.p_z - s.encoder * joint.px().values();
    return f_beta(s.p_z, params) + g_beta(joint, s.encoder, params) + s.mu_z.dot(r) + 0.5 * params.c * r.squaredNorm();
}

/// Gradient in p_z of L_c + omega D_phi(p_z || p_z_prev):
///   grad_f + mu + c (p_z - B p_{z|x}) + omega (log p_z - log p_z_prev).
inline Vec grad_augmented_z(const AdmmState& s, const JointXY& joint, const ObjectiveParams& params) {
    Vec g = grad_f(s.p_z, params);
    g += s.mu_z + params.c * (s.p_z - s.encoder * joint.px().values());
    if (params.omega != 0.0) {
        detail::require_positive(s.p_z_prev, "grad_augmented_z anchor");
        g.array() += params.omega * (s.p_z.array().log() - s.p_z_prev.array().log());
    }
    return g;
}

/// Gradient in p_{z|x} of L_c: grad_g - B^T mu - c B^T (p_z - B p_{z|x}).
inline EncoderMatrix grad_augmented_zx(const AdmmState& s, const JointXY& joint, const ObjectiveParams& params) {
    const Vec& px = joint.px().values();
    EncoderMatrix g = grad_g(joint, s.encoder, params);
    const Vec pull = s.mu_z + params.c * (s.p_z - s.encoder * px);
    g.noalias() -= pull * px.transpose();
    return g;
}

}  // namespace ibadmm

#endif  // IBADMM_OBJECTIVE_HPP
