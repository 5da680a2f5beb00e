#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ibadmm;
using fixtures::paper_joint;

namespace {

// Formula-by-formula evaluation with plain loops: p(y|z) from the joint directly,
// without going through the decoder.
EncoderMatrix scripted_ba_step(const EncoderMatrix& e, double beta) {
    const double t[3][3] = {{0.7, 0.3, 0.075}, {0.15, 0.5, 0.025}, {0.15, 0.2, 0.9}};
    const double px = 1.0 / 3.0;
    const Eigen::Index nz = e.rows();
    EncoderMatrix out(nz, 3);
    for (int x = 0; x < 3; ++x) {
        double norm = 0.0;
        for (Eigen::Index z = 0; z < nz; ++z) {
            double pz = 0.0;
            for (int xx = 0; xx < 3; ++xx) pz += e(z, xx) * px;
            double kl = 0.0;
            for (int y = 0; y < 3; ++y) {
                double pyz = 0.0;
                for (int xx = 0; xx < 3; ++xx) pyz += t[y][xx] * px * e(z, xx);
                kl += t[y][x] * std::log(t[y][x] / (pyz / pz));
            }
            out(z, x) = pz * std::exp(-beta * kl);
            norm += out(z, x);
        }
        out.col(x) /= norm;
    }
    return out;
}

double ib_value(const JointXY& j, const EncoderMatrix& e, double beta) {
    return mutual_information_xz(j, e) - beta * mutual_information_yz(j, e);
}

}  // namespace

TEST(BaStep, ConstantRowsAreFixed) {
    Vec r(3);
    r << 0.2, 0.5, 0.3;
    const EncoderMatrix e = r.replicate(1, 3);
    EXPECT_LE((ba_step(paper_joint(), e, 4.0) - e).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BaStep, BetaZeroReturnsMarginal) {
    Rng rng(3);
    const JointXY j = paper_joint();
    const EncoderMatrix e = random_encoder(rng, 4, 3, 0.0);
    const Vec pz = e * j.px().values();
    const EncoderMatrix next = ba_step(j, e, 0.0);
    for (Eigen::Index x = 0; x < 3; ++x) EXPECT_LE((next.col(x) - pz).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BaStep, MatchesScriptedFormula) {
    Rng rng(10);
    for (int t = 0; t < 5; ++t) {
        const EncoderMatrix e = random_encoder(rng, 3, 3, 0.0);
        EXPECT_LE((ba_step(paper_joint(), e, 5.0) - scripted_ba_step(e, 5.0)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(BaStep, RowStochastic) {
    Rng rng(11);
    const JointXY j = paper_joint();
    for (int t = 0; t < 100; ++t) {
        const EncoderMatrix e = random_encoder(rng, 2 + t % 4, 3, 0.0);
        const EncoderMatrix next = ba_step(j, e, 10.0 * rng.uniform());
        for (Eigen::Index x = 0; x < 3; ++x) EXPECT_NEAR(next.col(x).sum(), 1.0, 1e-9);
        EXPECT_GE(next.minCoeff(), 0.0);
    }
}

TEST(BaStep, DeadClusterStaysDead) {
    EncoderMatrix e(3, 3);
    e << 0.5, 0.2, 0.1, 0.5, 0.8, 0.9, 0.0, 0.0, 0.0;
    const EncoderMatrix next = ba_step(paper_joint(), e, 3.0);
    EXPECT_EQ(next.row(2).cwiseAbs().maxCoeff(), 0.0);
    for (Eigen::Index x = 0; x < 3; ++x) EXPECT_NEAR(next.col(x).sum(), 1.0, 1e-12);
}

TEST(BaSolve, ConstantInitConvergesImmediately) {
    const BaResult r = ba_solve(paper_joint(), EncoderMatrix::Constant(3, 3, 1.0 / 3), BaConfig{5.0});
    EXPECT_TRUE(r.record.converged);
    EXPECT_EQ(r.record.iterations, 1);
    EXPECT_NEAR(r.record.i_xz, 0.0, 1e-15);
    EXPECT_NEAR(r.record.i_yz, 0.0, 1e-15);
}

TEST(BaSolve, LagrangianNonIncreasing) {
    const JointXY j = paper_joint();
    Rng rng(21);
    for (const double beta : {2.0, 5.0, 10.0}) {
        EncoderMatrix e = random_encoder(rng, 3, 3, 1e-4);
        double prev = ib_value(j, e, beta);
        for (int k = 0; k < 300; ++k) {
            e = ba_step(j, e, beta);
            const double v = ib_value(j, e, beta);
            EXPECT_LE(v, prev + 1e-9) << "beta " << beta << " step " << k;
            prev = v;
        }
    }
}

TEST(BaSolve, SelfConsistentAtConvergence) {
    const JointXY j = paper_joint();
    BaConfig cfg{6.0};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BaResult r = ba_solve(j, 3, cfg, seed);
        ASSERT_TRUE(r.record.converged);
        EXPECT_LE((ba_step(j, r.encoder, cfg.beta) - r.encoder).cwiseAbs().maxCoeff(), 10.0 * cfg.tol);
        EXPECT_LE(r.record.i_yz, r.record.i_xz + 1e-9);
    }
}

TEST(BaSolve, TrivialBelowOne) {
    const JointXY j = paper_joint();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BaResult r = ba_solve(j, 3, BaConfig{0.9}, seed);
        EXPECT_LE(r.record.i_xz, 1e-3) << "seed " << seed;
    }
}

TEST(BaSolve, DeterministicPerSeed) {
    const JointXY j = paper_joint();
    const BaResult a = ba_solve(j, 3, BaConfig{4.0}, 77);
    const BaResult b = ba_solve(j, 3, BaConfig{4.0}, 77);
    EXPECT_EQ(a.encoder, b.encoder);
    EXPECT_EQ(a.record.iterations, b.record.iterations);
    EXPECT_EQ(a.record.i_yz, b.record.i_yz);
}

TEST(BaConfig, Validation) {
    BaConfig cfg;
    cfg.tol = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = BaConfig{};
    cfg.max_iters = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}
