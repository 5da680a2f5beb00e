#ifndef IBADMM_PROB_HPP
#define IBADMM_PROB_HPP

// Discrete distributions and the information functionals built on them.
//
// Conventions used throughout the library:
//   * natural logarithms (nats), 0 log 0 = 0;
//   * a conditional p(a|b) is stored as an N_a x N_b matrix whose columns
//     are distributions (column b is p(.|b));
//   * the encoder p(z|x) is an N_z x N_x row-major matrix, so its raw
//     storage is the z-major cascade
//       (p(z1|x1), ..., p(z1|xN), p(z2|x1), ..., p(zN|xN)).

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "ibadmm/errors.hpp"

namespace ibadmm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// N_z x N_x, row-major: data() is the cascaded p_{z|x}.
using EncoderMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kSimplexTol = 1e-9;

namespace detail {

inline double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

template <typename Derived>
void check_simplex(const Eigen::MatrixBase<Derived>& v, const char* what) {
    if (v.size() < 1) {
        throw ValidationError(std::string(what) + ": empty distribution");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double e = v(i);
        if (!std::isfinite(e) || e < 0.0) {
            std::ostringstream os;
            os << what << ": entry " << i << " = " << e << " is not a probability";
            throw ValidationError(os.str());
        }
        sum += e;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": entries sum to " << sum << ", expected 1";
        throw ValidationError(os.str());
    }
}

template <typename Derived>
void check_column_stochastic(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw ValidationError(std::string(what) + ": empty conditional");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        check_simplex(m.col(c), what);
    }
}

}  // namespace detail

/// A point on the probability simplex. Immutable once validated.
class ProbVector {
 public:
    explicit ProbVector(Vec entries) : p_(std::move(entries)) {
        detail::check_simplex(p_, "ProbVector");
    }
    ProbVector(std::initializer_list<double> entries)
        : ProbVector(Vec(Eigen::Map<const Vec>(entries.begin(), static_cast<Eigen::Index>(entries.size())))) {}
    explicit ProbVector(const std::vector<double>& entries)
        : ProbVector(Vec(Eigen::Map<const Vec>(entries.data(), static_cast<Eigen::Index>(entries.size())))) {}

    static ProbVector uniform(std::size_t n) {
        if (n == 0) throw ValidationError("ProbVector: empty distribution");
        return ProbVector(Vec::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
    }

    const Vec& values() const noexcept { return p_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
    double operator[](std::size_t i) const { return p_(static_cast<Eigen::Index>(i)); }

 private:
    Vec p_;
};

/// The conditional p(z|x), validated column-stochastic.
class Encoder {
 public:
    explicit Encoder(EncoderMatrix m) : m_(std::move(m)) {
        detail::check_column_stochastic(m_, "Encoder");
    }

    /// Row i of `rows` is p(.|x_i).
    static Encoder from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty() || rows.front().empty()) throw ValidationError("Encoder: empty");
        const auto nx = static_cast<Eigen::Index>(rows.size());
        const auto nz = static_cast<Eigen::Index>(rows.front().size());
        EncoderMatrix m(nz, nx);
        for (Eigen::Index i = 0; i < nx; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            if (static_cast<Eigen::Index>(r.size()) != nz) throw DimensionError("Encoder: ragged rows");
            for (Eigen::Index j = 0; j < nz; ++j) m(j, i) = r[static_cast<std::size_t>(j)];
        }
        return Encoder(std::move(m));
    }

    /// Every x mapped to the same distribution r.
    static Encoder constant(const ProbVector& r, std::size_t nx) {
        EncoderMatrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(nx));
        m.colwise() = r.values();
        return Encoder(std::move(m));
    }

    static Encoder identity(std::size_t n) {
        const auto k = static_cast<Eigen::Index>(n);
        return Encoder(EncoderMatrix::Identity(k, k));
    }

    const EncoderMatrix& matrix() const noexcept { return m_; }
    std::size_t nz() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t nx() const noexcept { return static_cast<std::size_t>(m_.cols()); }
    double operator()(std::size_t z, std::size_t x) const {
        return m_(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(x));
    }
    /// p(.|x_i).
    ProbVector row(std::size_t i) const { return ProbVector(Vec(m_.col(static_cast<Eigen::Index>(i)))); }
    /// The z-major cascade p_{z|x}.
    Vec cascade() const { return Eigen::Map<const Vec>(m_.data(), m_.size()); }

 private:
    EncoderMatrix m_;
};

/// Fixed joint distribution p(x, y) given as p(y|x) and p(x). Every
/// quantity derived from it is computed once at construction.
class JointXY {
 public:
    /// `table` is N_y x N_x; column x is p(.|x).
    JointXY(Mat table, ProbVector prior) : table_(std::move(table)), prior_(std::move(prior)) {
        if (table_.cols() != static_cast<Eigen::Index>(prior_.size())) {
            throw DimensionError("JointXY: p(y|x) has " + std::to_string(table_.cols()) +
                                 " columns but p(x) has " + std::to_string(prior_.size()) + " entries");
        }
        detail::check_column_stochastic(table_, "JointXY p(y|x)");
        if ((table_.array() <= 0.0).any()) {
            throw PositivityError("JointXY: p(y|x) must be strictly positive");
        }
        const Vec& px = prior_.values();
        joint_ = table_ * px.asDiagonal();
        py_ = joint_.rowwise().sum();
        for (Eigen::Index y = 0; y < py_.size(); ++y) {
            if (!(py_(y) > 0.0)) throw ValidationError("JointXY: p(y) = 0 for y = " + std::to_string(y));
        }
        x_given_y_ = (py_.cwiseInverse().asDiagonal() * joint_).transpose();
    }

    /// Row-major rows of p(y|x), i.e. rows[y][x].
    static JointXY from_rows(const std::vector<std::vector<double>>& rows, const std::vector<double>& px) {
        if (rows.empty()) throw ValidationError("JointXY: empty p(y|x)");
        Mat t(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t y = 0; y < rows.size(); ++y) {
            if (rows[y].size() != rows.front().size()) throw DimensionError("JointXY: ragged p(y|x)");
            for (std::size_t x = 0; x < rows[y].size(); ++x) {
                t(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = rows[y][x];
            }
        }
        return JointXY(std::move(t), ProbVector(px));
    }

    std::size_t nx() const noexcept { return static_cast<std::size_t>(table_.cols()); }
    std::size_t ny() const noexcept { return static_cast<std::size_t>(table_.rows()); }

    const Mat& y_given_x() const noexcept { return table_; }
    const ProbVector& px() const noexcept { return prior_; }
    const Vec& py() const noexcept { return py_; }
    /// N_y x N_x matrix of p(x, y).
    const Mat& joint() const noexcept { return joint_; }
    /// N_x x N_y; column y is p(.|y).
    const Mat& x_given_y() const noexcept { return x_given_y_; }

 private:
    Mat table_;
    ProbVector prior_;
    Mat joint_;
    Vec py_;
    Mat x_given_y_;
};

/// The matrices B = I_{N_z} (x) p_x^T and J = 1_{N_z}^T (x) I_{N_x} acting on
/// the cascaded encoder. Applied implicitly; `dense_*` exist for checking.
class LinearOps {
 public:
    LinearOps(const Vec& px, std::size_t nz) : px_(px), nz_(static_cast<Eigen::Index>(nz)) {}

    /// B p_{z|x}: the marginal sum_x p(x) p(.|x).
    Vec apply_B(const EncoderMatrix& e) const { return e * px_; }

    /// B^T v: cascade with component (x_i, z_j) = p(x_i) v_j.
    EncoderMatrix apply_Bt(const Vec& v) const { return v * px_.transpose(); }

    /// J p_{z|x}: per-x row sums.
    Vec apply_J(const EncoderMatrix& e) const { return e.colwise().sum().transpose(); }

    Mat dense_B() const {
        Mat b = Mat::Zero(nz_, nz_ * px_.size());
        for (Eigen::Index j = 0; j < nz_; ++j) b.block(j, j * px_.size(), 1, px_.size()) = px_.transpose();
        return b;
    }

    Mat dense_J() const {
        const Eigen::Index nx = px_.size();
        Mat m = Mat::Zero(nx, nz_ * nx);
        for (Eigen::Index j = 0; j < nz_; ++j) m.block(0, j * nx, nx, nx) = Mat::Identity(nx, nx);
        return m;
    }

 private:
    Vec px_;
    Eigen::Index nz_;
};

// -- functionals ------------------------------------------------------------

/// -sum p log p without validation; used on iterates and decoder columns.
template <typename Derived>
double entropy_unchecked(const Eigen::MatrixBase<Derived>& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) h -= detail::xlogx(p(i));
    return h;
}

inline double entropy(const ProbVector& p) { return entropy_unchecked(p.values()); }

inline double kl_divergence(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size()) throw DimensionError("kl_divergence: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) {
            throw InfiniteDivergenceError("kl_divergence: p_" + std::to_string(i) + " > 0 but q_" +
                                          std::to_string(i) + " = 0");
        }
        d += p[i] * std::log(p[i] / q[i]);
    }
    // Rounding can leave a tiny negative value when p == q.
    return d < 0.0 ? 0.0 : d;
}

inline void check_dims(const JointXY& joint, const EncoderMatrix& e) {
    if (static_cast<std::size_t>(e.cols()) != joint.nx()) {
        throw DimensionError("encoder has " + std::to_string(e.cols()) + " x-columns, joint has N_x = " +
                             std::to_string(joint.nx()));
    }
}

/// N_z x N_y matrix of p(z|y) = sum_x p(z|x) p(x|y).
inline Mat markov_decoder(const JointXY& joint, const EncoderMatrix& e) {
    check_dims(joint, e);
    return e * joint.x_given_y();
}
inline Mat markov_decoder(const JointXY& joint, const Encoder& e) { return markov_decoder(joint, e.matrix()); }

/// I(X;Z) = H(B p_{z|x}) - sum_x p(x) H(p(.|x)).
inline double mutual_information_xz(const JointXY& joint, const EncoderMatrix& e) {
    check_dims(joint, e);
    const Vec& px = joint.px().values();
    const Vec pz = e * px;
    double cond = 0.0;
    for (Eigen::Index x = 0; x < e.cols(); ++x) cond += px(x) * entropy_unchecked(e.col(x));
    const double v = entropy_unchecked(pz) - cond;
    return v < 0.0 && v > -1e-12 ? 0.0 : v;
}
inline double mutual_information_xz(const JointXY& joint, const Encoder& e) {
    return mutual_information_xz(joint, e.matrix());
}

/// I(Y;Z) through the Markov decoder p(z|y).
inline double mutual_information_yz(const JointXY& joint, const EncoderMatrix& e) {
    const Mat dec = markov_decoder(joint, e);
    const Vec& py = joint.py();
    const Vec pz = dec * py;
    double cond = 0.0;
    for (Eigen::Index y = 0; y < dec.cols(); ++y) cond += py(y) * entropy_unchecked(dec.col(y));
    const double v = entropy_unchecked(pz) - cond;
    return v < 0.0 && v > -1e-12 ? 0.0 : v;
}
inline double mutual_information_yz(const JointXY& joint, const Encoder& e) {
    return mutual_information_yz(joint, e.matrix());
}

/// I(X;Y) of the joint itself.
inline double mutual_information_xy(const JointXY& joint) {
    return mutual_information_yz(joint, EncoderMatrix::Identity(static_cast<Eigen::Index>(joint.nx()),
                                                                static_cast<Eigen::Index>(joint.nx())));
}

struct KappaResult {
    double kappa = 0.0;
    std::vector<double> kappa_y;
};

/// kappa_y = (max_x p(y|x) / min_x p(y|x) - 1)^2 and kappa = max_y kappa_y.
inline KappaResult kappa(const Mat& y_given_x) {
    if ((y_given_x.array() <= 0.0).any()) {
        throw PositivityError("kappa: p(y|x) must be strictly positive");
    }
    KappaResult r;
    r.kappa_y.reserve(static_cast<std::size_t>(y_given_x.rows()));
    for (Eigen::Index y = 0; y < y_given_x.rows(); ++y) {
        const double ratio = y_given_x.row(y).maxCoeff() / y_given_x.row(y).minCoeff() - 1.0;
        r.kappa_y.push_back(ratio * ratio);
        r.kappa = std::max(r.kappa, ratio * ratio);
    }
    return r;
}
inline KappaResult kappa(const JointXY& joint) { return kappa(joint.y_given_x()); }

}  // namespace ibadmm

#endif  // IBADMM_PROB_HPP
