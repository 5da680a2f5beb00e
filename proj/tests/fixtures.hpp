#ifndef IBADMM_TESTS_FIXTURES_HPP
#define IBADMM_TESTS_FIXTURES_HPP

#include <cmath>
#include <string>

#include "ibadmm/ibadmm.hpp"

namespace fixtures {

using namespace ibadmm;

inline JointXY paper_joint() {
    return JointXY::from_rows({{0.7, 0.3, 0.075}, {0.15, 0.5, 0.025}, {0.15, 0.2, 0.9}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

inline std::string data_path(const std::string& name) { return std::string(IBADMM_DATA_DIR) + "/" + name; }

/// I(X;Y) of the bundled joint by direct summation over the nine cells.
inline double paper_ixy_oracle() {
    const double t[3][3] = {{0.7, 0.3, 0.075}, {0.15, 0.5, 0.025}, {0.15, 0.2, 0.9}};
    double v = 0.0;
    for (int y = 0; y < 3; ++y) {
        double py = 0.0;
        for (int x = 0; x < 3; ++x) py += t[y][x] / 3.0;
        for (int x = 0; x < 3; ++x) {
            const double pxy = t[y][x] / 3.0;
            v += pxy * std::log(pxy / (py / 3.0));
        }
    }
    return v;
}

inline EncoderMatrix interior_encoder(Rng& rng, Eigen::Index nz, Eigen::Index nx, double floor = 0.02) {
    return random_encoder(rng, nz, nx, floor);
}

/// State with p_z on the simplex away from B e and nonzero duals.
inline AdmmState interior_state(Rng& rng, const JointXY& joint, Eigen::Index nz) {
    AdmmState s;
    s.encoder = interior_encoder(rng, nz, static_cast<Eigen::Index>(joint.nx()));
    s.p_z = random_simplex_point(rng, nz, 0.02);
    s.p_z_prev = random_simplex_point(rng, nz, 0.02);
    s.mu_z = Vec(nz);
    for (Eigen::Index i = 0; i < nz; ++i) s.mu_z(i) = 2.0 * rng.uniform() - 1.0;
    return s;
}

}  // namespace fixtures

#endif  // IBADMM_TESTS_FIXTURES_HPP
