#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"

using namespace ibadmm;
using fixtures::paper_joint;

namespace {

constexpr double kH = 1e-6;
constexpr double kRel = 1e-5;

// Relative error measured against the gradient's scale; single components
// can sit near zero, where a pure componentwise ratio is meaningless.
double rel_error(const Vec& analytic, const Vec& numeric) {
    const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
    return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

Vec central_diff(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec a = x, b = x;
        a(i) += kH;
        b(i) -= kH;
        g(i) = (f(a) - f(b)) / (2.0 * kH);
    }
    return g;
}

Vec flat(const EncoderMatrix& e) { return Eigen::Map<const Vec>(e.data(), e.size()); }
EncoderMatrix unflat(const Vec& v, Eigen::Index nz, Eigen::Index nx) {
    return Eigen::Map<const EncoderMatrix>(v.data(), nz, nx);
}

}  // namespace

TEST(Params, Validation) {
    EXPECT_NO_THROW((ObjectiveParams{0.0, 1.0, 0.0}.validate()));
    EXPECT_THROW((ObjectiveParams{1.0, 0.0, 0.0}.validate()), ConfigError);
    EXPECT_THROW((ObjectiveParams{-1.0, 1.0, 0.0}.validate()), ConfigError);
    EXPECT_THROW((ObjectiveParams{1.0, 1.0, -0.5}.validate()), ConfigError);
}

TEST(FBeta, Examples) {
    EXPECT_EQ(f_beta(Vec::Constant(3, 1.0 / 3), {1.0, 1.0, 0.0}), 0.0);
    EXPECT_NEAR(f_beta(Vec::Constant(3, 1.0 / 3), {2.0, 1.0, 0.0}), -std::log(3.0), 1e-15);
    Vec point(3);
    point << 1.0, 0.0, 0.0;
    EXPECT_EQ(f_beta(point, {2.0, 1.0, 0.0}), 0.0);
}

TEST(GBeta, Examples) {
    const JointXY j = paper_joint();
    EXPECT_NEAR(g_beta(j, EncoderMatrix::Ones(1, 3), {2.0, 1.0, 0.0}), 0.0, 1e-15);
    const EncoderMatrix constant = EncoderMatrix::Constant(3, 3, 1.0 / 3);
    EXPECT_NEAR(g_beta(j, constant, {2.0, 1.0, 0.0}), std::log(3.0), 1e-14);

    // H(X|Y) of the bundled joint by summing over the nine cells.
    double h_x_given_y = 0.0;
    const Mat& xy = j.x_given_y();
    for (Eigen::Index y = 0; y < 3; ++y)
        for (Eigen::Index x = 0; x < 3; ++x) h_x_given_y -= j.py()(y) * xy(x, y) * std::log(xy(x, y));
    EXPECT_NEAR(h_x_given_y, std::log(3.0) - fixtures::paper_ixy_oracle(), 1e-14);
    EXPECT_NEAR(g_beta(j, EncoderMatrix::Identity(3, 3), {2.0, 1.0, 0.0}), 2.0 * h_x_given_y, 1e-14);
}

TEST(GradF, Examples) {
    EXPECT_EQ(grad_f(Vec::Constant(3, 1.0 / 3), {1.0, 1.0, 0.0}).cwiseAbs().maxCoeff(), 0.0);
    const Vec g = grad_f(Vec::Constant(3, 1.0 / 3), {2.0, 1.0, 0.0});
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(g(i), 1.0 - std::log(3.0), 1e-15);
    Vec zero(2);
    zero << 1.0, 0.0;
    EXPECT_THROW(grad_f(zero, {2.0, 1.0, 0.0}), GradientSingularityError);
}

TEST(GradG, ConstantRowsClosedForm) {
    const JointXY j = paper_joint();
    Vec r(3);
    r << 0.2, 0.5, 0.3;
    const EncoderMatrix e = r.replicate(1, 3);
    for (const double beta : {0.0, 2.5}) {
        const EncoderMatrix g = grad_g(j, e, {beta, 1.0, 0.0});
        for (Eigen::Index x = 0; x < 3; ++x)
            for (Eigen::Index z = 0; z < 3; ++z)
                EXPECT_NEAR(g(z, x), (1.0 / 3.0) * (1.0 - beta) * (std::log(r(z)) + 1.0), 1e-14);
    }
    EncoderMatrix bad = EncoderMatrix::Identity(3, 3);
    EXPECT_THROW(grad_g(j, bad, {1.0, 1.0, 0.0}), GradientSingularityError);
}

TEST(Bregman, Examples) {
    const ProbVector p{0.5, 0.5}, q{0.25, 0.75};
    EXPECT_EQ(bregman_kl(p, p, 4.0), 0.0);
    EXPECT_EQ(bregman_kl(p, q, 0.0), 0.0);
    EXPECT_NEAR(bregman_kl(p, q, 4.0), 0.575364, 1e-6);
    EXPECT_NEAR(bregman_divergence(p.values(), q.values()), kl_divergence(p, q), 1e-15);
}

TEST(AugmentedLagrangian, Examples) {
    const JointXY j = paper_joint();
    Rng rng(4);
    const ObjectiveParams params{3.0, 10.0, 4.0};
    AdmmState s;
    s.encoder = random_encoder(rng, 3, 3, 0.01);
    s.p_z = s.encoder * j.px().values();
    s.p_z_prev = s.p_z;
    s.mu_z = Vec::Zero(3);
    const double ib = mutual_information_xz(j, s.encoder) - 3.0 * mutual_information_yz(j, s.encoder);
    EXPECT_NEAR(augmented_lagrangian(s, j, params), ib, 1e-12);

    AdmmState id;
    id.encoder = EncoderMatrix::Identity(3, 3);
    id.p_z = Vec::Constant(3, 1.0 / 3);
    id.p_z_prev = id.p_z;
    id.mu_z = Vec::Zero(3);
    // beta = 1: I(X;Z) - I(Y;Z) = ln 3 - I(X;Y) for the lossless encoder.
    EXPECT_NEAR(augmented_lagrangian(id, j, {1.0, 5.0, 0.0}), std::log(3.0) - fixtures::paper_ixy_oracle(), 1e-12);

    // The penalty adds (c/2) delta^2 beyond the first-order change of F.
    const double delta = 1e-3;
    AdmmState moved = s;
    moved.p_z(0) += delta;
    const double expect = augmented_lagrangian(s, j, params) + (f_beta(moved.p_z, params) - f_beta(s.p_z, params)) +
                          0.5 * params.c * delta * delta;
    EXPECT_NEAR(augmented_lagrangian(moved, j, params), expect, 1e-12);
}

TEST(GradAugmented, SpecialCases) {
    const JointXY j = paper_joint();
    Rng rng(6);
    AdmmState s;
    s.encoder = random_encoder(rng, 3, 3, 0.01);
    s.p_z = s.encoder * j.px().values();
    s.p_z_prev = random_simplex_point(rng, 3, 0.01);
    s.mu_z = Vec::Zero(3);
    const ObjectiveParams params{2.0, 7.0, 0.0};
    EXPECT_LE((grad_augmented_z(s, j, params) - grad_f(s.p_z, params)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((grad_augmented_zx(s, j, params) - grad_g(j, s.encoder, params)).cwiseAbs().maxCoeff(), 1e-15);
}

// Finite-difference checks at random interior points (none of them on the
// simplex or at a feasible pair, so every term contributes).
TEST(Gradients, MatchCentralDifferences) {
    const JointXY j = paper_joint();
    Rng rng(99);
    for (int t = 0; t < 20; ++t) {
        const ObjectiveParams params{0.5 + 9.5 * rng.uniform(), 1.0 + 50.0 * rng.uniform(), 4.0 * rng.uniform()};
        const AdmmState s = fixtures::interior_state(rng, j, 3);

        const auto f = [&](const Vec& v) { return f_beta(v, params); };
        EXPECT_LE(rel_error(grad_f(s.p_z, params), central_diff(f, s.p_z)), kRel) << "grad_f, point " << t;

        const auto g = [&](const Vec& v) { return g_beta(j, unflat(v, 3, 3), params); };
        EXPECT_LE(rel_error(flat(grad_g(j, s.encoder, params)), central_diff(g, flat(s.encoder))), kRel)
            << "grad_g, point " << t;

        const auto lz = [&](const Vec& v) {
            AdmmState m = s;
            m.p_z = v;
            return augmented_lagrangian(m, j, params) + params.omega * bregman_divergence(v, s.p_z_prev);
        };
        EXPECT_LE(rel_error(grad_augmented_z(s, j, params), central_diff(lz, s.p_z)), kRel)
            << "grad_augmented_z, point " << t;

        const auto lzx = [&](const Vec& v) {
            AdmmState m = s;
            m.encoder = unflat(v, 3, 3);
            return augmented_lagrangian(m, j, params);
        };
        EXPECT_LE(rel_error(flat(grad_augmented_zx(s, j, params)), central_diff(lzx, flat(s.encoder))), kRel)
            << "grad_augmented_zx, point " << t;
    }
}

TEST(Decomposition, MatchesIbLagrangian) {
    const JointXY j = paper_joint();
    Rng rng(12);
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index nz = 2 + t % 4;
        const ObjectiveParams params{10.0 * rng.uniform(), 1.0, 0.0};
        const EncoderMatrix e = random_encoder(rng, nz, 3, 0.0);
        const Vec pz = e * j.px().values();
        const double lhs = f_beta(pz, params) + g_beta(j, e, params);
        const double rhs = mutual_information_xz(j, e) - params.beta * mutual_information_yz(j, e);
        EXPECT_NEAR(lhs, rhs, 1e-10);
    }
}

TEST(FBeta, ConvexAlongSegments) {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const ObjectiveParams params{1.0 + 9.0 * rng.uniform(), 1.0, 0.0};
        const Vec a = rng.simplex(4), b = rng.simplex(4);
        EXPECT_LE(f_beta(0.5 * (a + b), params), 0.5 * (f_beta(a, params) + f_beta(b, params)) + 1e-12);
    }
}

TEST(AugmentedLagrangian, InvariantUnderRelabeling) {
    const JointXY j = paper_joint();
    Rng rng(17);
    const AdmmState s = fixtures::interior_state(rng, j, 4);
    const int order[4] = {2, 0, 3, 1};
    AdmmState p = s;
    for (int z = 0; z < 4; ++z) {
        p.encoder.row(z) = s.encoder.row(order[z]);
        p.p_z(z) = s.p_z(order[z]);
        p.p_z_prev(z) = s.p_z_prev(order[z]);
        p.mu_z(z) = s.mu_z(order[z]);
    }
    const ObjectiveParams params{4.0, 20.0, 4.0};
    EXPECT_NEAR(augmented_lagrangian(p, j, params), augmented_lagrangian(s, j, params), 1e-13);
}
