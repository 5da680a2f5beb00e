#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ibadmm;

TEST(MeanSubtract, Examples) {
    EXPECT_EQ(mean_subtract(Vec::Constant(4, 2.5), 4).cwiseAbs().maxCoeff(), 0.0);
    Vec a(2);
    a << 1.0, -1.0;
    EXPECT_EQ(mean_subtract(a, 2), a);
    Vec b(3);
    b << 3.0, 1.0, 2.0;
    Vec expect(3);
    expect << 1.0, -1.0, 0.0;
    EXPECT_EQ(mean_subtract(b, 3), expect);
    EXPECT_THROW(mean_subtract(b, 2), DimensionError);
}

TEST(MeanSubtract, BlocksAndColumnsAgree) {
    Rng rng(1);
    EncoderMatrix g(3, 4);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.uniform();
    // x-major order: one block of N_z entries per x.
    Vec xmajor(12);
    for (Eigen::Index x = 0; x < 4; ++x) xmajor.segment(3 * x, 3) = g.col(x);
    const Vec blocks = mean_subtract(xmajor, 3);
    const EncoderMatrix cols = mean_subtract_columns(g);
    for (Eigen::Index x = 0; x < 4; ++x) EXPECT_LE((blocks.segment(3 * x, 3) - cols.col(x)).cwiseAbs().maxCoeff(), 1e-15);
    for (Eigen::Index x = 0; x < 4; ++x) EXPECT_NEAR(cols.col(x).sum(), 0.0, 1e-15);
}

TEST(FeasibleStep, Examples) {
    Vec far(3);
    far << 0.3, 0.3, 0.4;
    Vec d(3);
    d << -0.1, 0.05, 0.05;
    EXPECT_EQ(feasible_step(far, d, 0.01, 1e-4), 0.01);

    const double eps = 1e-4;
    Vec edge(2);
    edge << eps, 1.0 - eps;
    Vec down(2);
    down << -1.0, 1.0;
    EXPECT_EQ(feasible_step(edge, down, 0.05, eps), 0.0);

    Vec half(2);
    half << 0.5, 0.5;
    EXPECT_NEAR(feasible_step(half, down, 1.0, 0.1), 0.396, 1e-15);
    EXPECT_EQ(feasible_step(half, Vec::Zero(2), 0.7, 0.1), 0.7);
}

TEST(FeasibleStep, KeepsFloorAndSum) {
    Rng rng(2);
    const double eps = 1e-3;
    for (int t = 0; t < 500; ++t) {
        Vec p = random_simplex_point(rng, 5, eps);
        Vec g(5);
        for (Eigen::Index i = 0; i < 5; ++i) g(i) = 10.0 * (rng.uniform() - 0.5);
        const Vec dir = mean_subtract(g, 5) * -1.0;
        const double step = feasible_step(p, dir, 10.0, eps);
        const double before = p.sum();
        p += step * dir;
        EXPECT_GE(p.minCoeff(), eps - 1e-12);
        EXPECT_NEAR(p.sum(), before, 1e-12);
    }
}

TEST(FaceDescent, PlainMeanSubtractionWhenInterior) {
    Vec p(3);
    p << 0.2, 0.3, 0.5;
    Vec g(3);
    g << 3.0, 1.0, 2.0;
    const Vec dir = face_descent_direction(p, g, 1e-4);
    Vec expect(3);
    expect << -1.0, 1.0, 0.0;
    EXPECT_LE((dir - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FaceDescent, HoldsPinnedCoordinate) {
    const double eps = 1e-3;
    Vec p(3);
    p << eps, 0.4, 1.0 - 0.4 - eps;
    Vec g(3);
    g << 5.0, 1.0, 0.0;
    const Vec dir = face_descent_direction(p, g, eps);
    EXPECT_EQ(dir(0), 0.0);
    EXPECT_NEAR(dir.sum(), 0.0, 1e-15);
    EXPECT_NEAR(dir(1), -0.5, 1e-15);
    EXPECT_GT(feasible_step(p, dir, 0.1, eps), 0.0);
}

TEST(Clamp, RaisesAndRenormalizes) {
    Vec v(4);
    v << 0.0, 0.5, 0.5, 0.0;
    clamp_to_interior(v, 0.01);
    EXPECT_NEAR(v.sum(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(v(0), 0.01);
    EXPECT_DOUBLE_EQ(v(3), 0.01);
    EXPECT_NEAR(v(1), 0.49, 1e-15);

    Vec ok(3);
    ok << 0.2, 0.3, 0.5;
    const Vec copy = ok;
    clamp_to_interior(ok, 0.01);
    EXPECT_EQ(ok, copy);

    // A second entry falls below the floor only after rescaling.
    Vec chain(3);
    chain << 0.0, 0.0101, 0.9899;
    clamp_to_interior(chain, 0.01);
    EXPECT_GE(chain.minCoeff(), 0.01 - 1e-15);
    EXPECT_NEAR(chain.sum(), 1.0, 1e-15);
}

TEST(Rng, DeterministicAndOnSimplex) {
    Rng a(42), b(42), c(43);
    const Vec x = a.simplex(5);
    EXPECT_EQ(x, b.simplex(5));
    EXPECT_NE(x, c.simplex(5));
    EXPECT_NEAR(x.sum(), 1.0, 1e-15);
    EXPECT_GE(x.minCoeff(), 0.0);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Seeds, MixIsStable) {
    static_assert(mix64(0) == 0xe220a8397b1dcdafULL);
    EXPECT_NE(combine_seed(1, 2), combine_seed(2, 1));
    EXPECT_EQ(combine_seed(5, 9), combine_seed(5, 9));
}

TEST(RandomEncoder, RespectsFloor) {
    Rng rng(7);
    const EncoderMatrix e = random_encoder(rng, 4, 6, 0.05);
    EXPECT_GE(e.minCoeff(), 0.05 - 1e-15);
    for (Eigen::Index x = 0; x < 6; ++x) EXPECT_NEAR(e.col(x).sum(), 1.0, 1e-12);
}
