#ifndef IBADMM_BA_HPP
#define IBADMM_BA_HPP

// Blahut-Arimoto self-consistent iteration for the IB Lagrangian:
//
//   p^{k+1}(z|x) = p^k(z) exp(-beta KL[p(y|x) || p^k(y|z)]) / K(x, beta)
//
// with p^k(z) = sum_x p^k(z|x) p(x) and p^k(y|z) obtained by Bayes from the
// Markov decoder p^k(z|y) = sum_x p^k(z|x) p(x|y).

#include <cmath>
#include <cstdint>

#include "ibadmm/prob.hpp"
#include "ibadmm/simplex.hpp"
#include "ibadmm/trace.hpp"

namespace ibadmm {

struct BaConfig {
    double beta = 1.0;
    long max_iters = 100000;
    /// Stop once the L1 change of the cascaded encoder drops below tol.
    double tol = 1e-10;
    /// Interior floor applied to the random initial encoder only.
    double eps_floor = 1e-4;

    void validate() const {
        if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be >= 0");
        if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
        if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
        if (!(eps_floor >= 0.0)) throw ConfigError("eps_floor must be >= 0");
    }
};

/// One self-consistent update. Clusters with p(z) = 0 stay dead: their
/// p(y|z) is undefined and their weight is 0 for every x.
inline EncoderMatrix ba_step(const JointXY& joint, const EncoderMatrix& e, double beta) {
    check_dims(joint, e);
    const Vec& px = joint.px().values();
    const Mat& table = joint.y_given_x();
    const Vec pz = e * px;
    const Mat dec = markov_decoder(joint, e);
    const Eigen::Index nz = e.rows();
    const Eigen::Index nx = e.cols();
    const Eigen::Index ny = table.rows();

    // p(y|z) = p(z|y) p(y) / p(z), N_y x N_z.
    Mat y_given_z = Mat::Zero(ny, nz);
    for (Eigen::Index z = 0; z < nz; ++z) {
        if (!(pz(z) > 0.0)) continue;
        for (Eigen::Index y = 0; y < ny; ++y) y_given_z(y, z) = dec(z, y) * joint.py()(y) / pz(z);
    }

    EncoderMatrix next(nz, nx);
    for (Eigen::Index x = 0; x < nx; ++x) {
        // Log-domain weights, shifted by their max before exponentiating.
        Vec logw = Vec::Constant(nz, -std::numeric_limits<double>::infinity());
        for (Eigen::Index z = 0; z < nz; ++z) {
            if (!(pz(z) > 0.0)) continue;
            double kl = 0.0;
            bool finite = true;
            for (Eigen::Index y = 0; y < ny; ++y) {
                const double p = table(y, x);
                const double q = y_given_z(y, z);
                if (!(q > 0.0)) {
                    finite = false;
                    break;
                }
                kl += p * std::log(p / q);
            }
            if (finite) logw(z) = std::log(pz(z)) - beta * kl;
        }
        const double top = logw.maxCoeff();
        if (!std::isfinite(top)) {
            throw DegenerateClusterError("ba_step: every cluster has zero weight for x = " + std::to_string(x));
        }
        double norm = 0.0;
        for (Eigen::Index z = 0; z < nz; ++z) {
            const double w = std::isfinite(logw(z)) ? std::exp(logw(z) - top) : 0.0;
            next(z, x) = w;
            norm += w;
        }
        next.col(x) /= norm;
    }
    return next;
}

struct BaResult {
    RunRecord record;
    EncoderMatrix encoder;
};

inline BaResult ba_solve(const JointXY& joint, const EncoderMatrix& init, const BaConfig& config,
                         std::uint64_t seed = 0) {
    const Stopwatch clock;
    config.validate();
    check_dims(joint, init);
    detail::check_column_stochastic(init, "ba_solve init encoder");

    BaResult out;
    out.encoder = init;
    RunRecord& rec = out.record;
    rec.method = "ba";
    rec.beta = config.beta;
    rec.seed = seed;

    double change = 0.0;
    for (long k = 1; k <= config.max_iters; ++k) {
        EncoderMatrix next = ba_step(joint, out.encoder, config.beta);
        change = (next - out.encoder).lpNorm<1>();
        out.encoder = std::move(next);
        rec.iterations = k;
        if (change < config.tol) {
            rec.converged = true;
            break;
        }
    }
    rec.residual = change;
    rec.i_xz = mutual_information_xz(joint, out.encoder);
    rec.i_yz = mutual_information_yz(joint, out.encoder);
    rec.cpu_ms = clock.elapsed_ms();
    return out;
}

/// Random start with rows uniform on the simplex, clamped to eps_floor.
inline BaResult ba_solve(const JointXY& joint, std::size_t nz, const BaConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    const double floor = config.eps_floor * static_cast<double>(nz) < 1.0 ? config.eps_floor : 0.0;
    const EncoderMatrix e =
        random_encoder(rng, static_cast<Eigen::Index>(nz), static_cast<Eigen::Index>(joint.nx()), floor);
    return ba_solve(joint, e, config, seed);
}

}  // namespace ibadmm

#endif  // IBADMM_BA_HPP
