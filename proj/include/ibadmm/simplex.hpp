#ifndef IBADMM_SIMPLEX_HPP
#define IBADMM_SIMPLEX_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ibadmm/prob.hpp"

namespace ibadmm {

/// Subtracts the mean of every consecutive block of `block` entries, so
/// each block sums to zero. A p_z gradient is one block; an encoder
/// gradient in cascade order is handled by `mean_subtract_columns`.
inline Vec mean_subtract(const Vec& g, Eigen::Index block) {
    if (block <= 0 || g.size() % block != 0) {
        throw DimensionError("mean_subtract: length " + std::to_string(g.size()) + " is not a multiple of " +
                             std::to_string(block));
    }
    Vec out = g;
    for (Eigen::Index b = 0; b < g.size(); b += block) {
        auto seg = out.segment(b, block);
        seg.array() -= seg.mean();
    }
    return out;
}

/// Per-x mean subtraction of an encoder-shaped gradient (blocks are the
/// rows p(.|x_i), i.e. the columns of the N_z x N_x matrix).
inline EncoderMatrix mean_subtract_columns(const EncoderMatrix& g) {
    EncoderMatrix out = g;
    out.rowwise() -= g.colwise().mean();
    return out;
}

/// Relative distance to the floor under which a coordinate counts as pinned.
inline constexpr double kPinnedRelTol = 1e-3;

/// Sum-zero descent direction -(g - mean(g)) restricted to the face of the
/// eps-simplex: coordinates sitting on the floor whose descent would push
/// them lower are held at zero and the mean is taken over the rest. With
/// nothing pinned this is plain mean subtraction. Without the restriction a
/// single pinned coordinate would zero the ratio-test step of its whole block.
template <typename P, typename G>
Vec face_descent_direction(const Eigen::MatrixBase<P>& point, const Eigen::MatrixBase<G>& grad, double eps_floor) {
    const Eigen::Index n = point.size();
    const double pin_gap = kPinnedRelTol * eps_floor;
    std::vector<char> pinned(static_cast<std::size_t>(n), 0);
    Vec dir(n);
    for (Eigen::Index pass = 0; pass < n; ++pass) {
        double sum = 0.0;
        Eigen::Index n_free = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!pinned[static_cast<std::size_t>(i)]) {
                sum += grad(i);
                ++n_free;
            }
        }
        const double mean = n_free > 0 ? sum / static_cast<double>(n_free) : 0.0;
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto& pin = pinned[static_cast<std::size_t>(i)];
            dir(i) = pin ? 0.0 : mean - grad(i);
            if (!pin && dir(i) < 0.0 && point(i) - eps_floor <= pin_gap) {
                pin = 1;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dir;
}

/// Largest admissible step along a sum-zero `direction` from `point`:
/// min(base_step, 0.99 t_max), where t_max is the ratio-test distance at
/// which the first decreasing coordinate reaches `eps_floor`.
template <typename P, typename D>
double feasible_step(const Eigen::MatrixBase<P>& point, const Eigen::MatrixBase<D>& direction, double base_step,
                     double eps_floor) {
    double t_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        const double d = direction(i);
        if (d < 0.0) t_max = std::min(t_max, std::max(point(i) - eps_floor, 0.0) / -d);
    }
    if (!std::isfinite(t_max)) return base_step;
    return std::min(base_step, 0.99 * t_max);
}

/// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t h, std::uint64_t v) noexcept { return mix64(h ^ mix64(v)); }

/// Deterministic random source. Only the raw mt19937_64 stream is used, so
/// results do not depend on the standard library's distribution classes.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform point on the simplex via normalized exponential spacings.
    Vec simplex(Eigen::Index n) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = -std::log1p(-uniform());
        const double s = v.sum();
        if (!(s > 0.0)) return Vec::Constant(n, 1.0 / static_cast<double>(n));
        return v / s;
    }

 private:
    std::mt19937_64 gen_;
};

/// Raises entries below eps_floor to the floor and rescales the remaining
/// entries so the total stays 1. Terminates in at most n passes because the
/// clamped set only grows. Requires a simplex point and eps_floor * n < 1.
template <typename Derived>
void clamp_to_interior(Eigen::MatrixBase<Derived>& v, double eps_floor) {
    const Eigen::Index n = v.size();
    std::vector<char> pinned(static_cast<std::size_t>(n), 0);
    for (Eigen::Index pass = 0; pass <= n; ++pass) {
        Eigen::Index n_pinned = 0;
        double free_mass = 0.0;
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto& p = pinned[static_cast<std::size_t>(i)];
            if (!p && v(i) < eps_floor) {
                p = 1;
                changed = true;
            }
            if (p) {
                ++n_pinned;
            } else {
                free_mass += v(i);
            }
        }
        if (!changed) break;
        const double scale = free_mass > 0.0 ? (1.0 - static_cast<double>(n_pinned) * eps_floor) / free_mass : 0.0;
        for (Eigen::Index i = 0; i < n; ++i) v(i) = pinned[static_cast<std::size_t>(i)] ? eps_floor : v(i) * scale;
    }
}

inline EncoderMatrix random_encoder(Rng& rng, Eigen::Index nz, Eigen::Index nx, double eps_floor) {
    EncoderMatrix e(nz, nx);
    for (Eigen::Index x = 0; x < nx; ++x) {
        Vec col = rng.simplex(nz);
        clamp_to_interior(col, eps_floor);
        e.col(x) = col;
    }
    return e;
}

inline Vec random_simplex_point(Rng& rng, Eigen::Index n, double eps_floor) {
    Vec v = rng.simplex(n);
    clamp_to_interior(v, eps_floor);
    return v;
}

}  // namespace ibadmm

#endif  // IBADMM_SIMPLEX_HPP
