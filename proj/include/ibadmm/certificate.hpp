#ifndef IBADMM_CERTIFICATE_HPP
#define IBADMM_CERTIFICATE_HPP

// Convergence-certificate quantities for the two-block solver:
//
//   kappa     = max_y (max_x p(y|x) / min_x p(y|x) - 1)^2
//   gamma     = beta kappa / eps - 1
//   eta_z     = beta + omega - 1
//   rho1(a)   = eta_z - gamma (1 + 1 / (c (1 - a)))
//   rho2(a)   = 1/(2c) - gamma (1/c^2 + (1 - a) / (c a))
//   rho3      = eta_z + c/2
//   alpha_thr = 1 - 1 / (2 eta_z)
//
// plus the Lyapunov sequence V^k = c/2 ||p_z^k - p_z*||^2 + 1/(2c) ||mu^k - mu*||^2
// evaluated on a recorded trace.

#include <optional>
#include <string>
#include <vector>

#include "ibadmm/admm.hpp"
#include "ibadmm/trace.hpp"

namespace ibadmm {

struct RhoSample {
    double alpha = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

struct Certificate {
    double kappa = 0.0;
    std::vector<double> kappa_y;
    double gamma_beta = 0.0;
    double eta_z = 0.0;
    double alpha_threshold = 0.0;
    std::vector<RhoSample> rho_profile;
    double rho3 = 0.0;
    bool feasible = false;
    /// Grid point witnessing feasibility, if any.
    std::optional<double> feasible_alpha;
    std::string diagnostic;
};

/// n uniform points on [lo, hi]; the default is 101 points on (0.005, 0.995).
inline std::vector<double> alpha_grid(std::size_t n = 101, double lo = 0.005, double hi = 0.995) {
    if (n < 1) throw ConfigError("alpha grid needs at least one point");
    if (!(lo > 0.0) || !(hi < 1.0) || !(lo <= hi)) throw ConfigError("alpha grid must lie inside (0, 1)");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

inline double rho1(double eta_z, double gamma, double c, double alpha) {
    return eta_z - gamma * (1.0 + 1.0 / (c * (1.0 - alpha)));
}

inline double rho2(double gamma, double c, double alpha) {
    return 1.0 / (2.0 * c) - gamma * (1.0 / (c * c) + (1.0 - alpha) / (c * alpha));
}

inline Certificate compute_certificate(const JointXY& joint, const AdmmConfig& config,
                                       const std::vector<double>& alphas = alpha_grid()) {
    config.params.validate();
    const double eps = config.eps_floor;
    if (!(eps > 0.0)) throw ConfigError("certificate needs eps_floor > 0");
    const double beta = config.params.beta;
    const double c = config.params.c;

    Certificate cert;
    const KappaResult k = kappa(joint);
    cert.kappa = k.kappa;
    cert.kappa_y = k.kappa_y;
    cert.gamma_beta = beta * cert.kappa / eps - 1.0;
    cert.eta_z = beta + config.params.omega - 1.0;
    cert.rho3 = cert.eta_z + c / 2.0;
    cert.alpha_threshold = cert.eta_z > 0.0 ? 1.0 - 1.0 / (2.0 * cert.eta_z) : std::nan("");

    cert.rho_profile.reserve(alphas.size());
    for (const double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha grid points must lie in (0, 1)");
        const RhoSample s{a, rho1(cert.eta_z, cert.gamma_beta, c, a), rho2(cert.gamma_beta, c, a)};
        cert.rho_profile.push_back(s);
        if (!cert.feasible_alpha && s.rho1 >= 0.0 && s.rho2 >= 0.0) cert.feasible_alpha = a;
    }
    if (!(cert.eta_z > 0.0)) {
        cert.diagnostic = "eta_z = beta + omega - 1 <= 0: the p_z block is not strongly convex";
        cert.feasible = false;
    } else if (cert.feasible_alpha) {
        cert.feasible = true;
    } else {
        cert.diagnostic = "no grid alpha with rho1 >= 0 and rho2 >= 0";
    }
    return cert;
}

struct StationaryPoint {
    Vec p_z;
    Vec mu_z;
};

/// V^k at every recorded iteration. Needs p_z and mu_z snapshots.
inline std::vector<double> lyapunov_trace(const IterationTrace& trace, const StationaryPoint& q_star, double c) {
    if (!(c > 0.0)) throw ConfigError("lyapunov_trace: c must be > 0");
    std::vector<double> v;
    v.reserve(trace.size());
    for (const TracePoint& pt : trace.points) {
        if (!pt.p_z || !pt.mu_z) {
            throw TraceIncompleteError("lyapunov_trace: iteration " + std::to_string(pt.iteration) +
                                       " has no p_z/mu_z snapshot");
        }
        if (pt.p_z->size() != q_star.p_z.size() || pt.mu_z->size() != q_star.mu_z.size()) {
            throw DimensionError("lyapunov_trace: snapshot length differs from q_star");
        }
        v.push_back(0.5 * c * (*pt.p_z - q_star.p_z).squaredNorm() +
                    (*pt.mu_z - q_star.mu_z).squaredNorm() / (2.0 * c));
    }
    return v;
}

/// The last recorded iterate, used as the stand-in stationary point.
inline StationaryPoint final_iterate(const IterationTrace& trace) {
    if (trace.empty() || !trace.points.back().p_z || !trace.points.back().mu_z) {
        throw TraceIncompleteError("final_iterate: trace has no final snapshot");
    }
    return {*trace.points.back().p_z, *trace.points.back().mu_z};
}

struct MonotonicityReport {
    bool monotone = true;
    /// Index k + 1 of the first v[k+1] > v[k] + slack.
    std::optional<std::size_t> first_violation;
    double max_increase = 0.0;
};

inline MonotonicityReport monotonicity_report(const std::vector<double>& v, double slack = 1e-10) {
    if (v.size() < 2) throw ValidationError("monotonicity_report: need at least two values");
    MonotonicityReport rep;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double inc = v[k + 1] - v[k];
        rep.max_increase = std::max(rep.max_increase, inc);
        if (inc > slack && !rep.first_violation) {
            rep.monotone = false;
            rep.first_violation = k + 1;
        }
    }
    return rep;
}

}  // namespace ibadmm

#endif  // IBADMM_CERTIFICATE_HPP
