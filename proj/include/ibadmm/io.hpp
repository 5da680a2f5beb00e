#ifndef IBADMM_IO_HPP
#define IBADMM_IO_HPP

// JSON input/output. A joint file looks like
//
//   {"p_y_given_x": [[...], ...], "p_x": [...]}
//
// where p_y_given_x is row-major with rows indexed by y and columns by x.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ibadmm/certificate.hpp"
#include "ibadmm/prob.hpp"
#include "ibadmm/trace.hpp"

namespace ibadmm {

using Json = nlohmann::json;

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline JointXY joint_from_json(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("joint: top level must be an object");
    if (!doc.contains("p_y_given_x") || !doc.contains("p_x")) {
        throw ValidationError("joint: needs keys \"p_y_given_x\" and \"p_x\"");
    }
    const Json& rows = doc.at("p_y_given_x");
    const Json& px = doc.at("p_x");
    if (!rows.is_array() || rows.empty()) throw ValidationError("joint: p_y_given_x must be a non-empty array");
    if (!px.is_array()) throw ValidationError("joint: p_x must be an array");
    try {
        return JointXY::from_rows(rows.get<std::vector<std::vector<double>>>(), px.get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("joint: non-numeric entry (") + e.what() + ")");
    }
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(what + ": invalid JSON (" + e.what() + ")");
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text, path);
}

inline JointXY load_joint(const std::string& path) { return joint_from_json(read_json_file(path)); }

inline Json joint_to_json(const JointXY& joint) {
    const Mat& t = joint.y_given_x();
    Json rows = Json::array();
    for (Eigen::Index y = 0; y < t.rows(); ++y) {
        Json row = Json::array();
        for (Eigen::Index x = 0; x < t.cols(); ++x) row.push_back(t(y, x));
        rows.push_back(std::move(row));
    }
    const Vec& px = joint.px().values();
    return Json{{"p_y_given_x", std::move(rows)}, {"p_x", std::vector<double>(px.data(), px.data() + px.size())}};
}

inline Json vec_to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Json record_to_json(const RunRecord& r) {
    Json j{{"method", r.method},     {"beta", r.beta},           {"c", r.c},
           {"omega", r.omega},       {"seed", r.seed},           {"converged", r.converged},
           {"iterations", r.iterations}, {"I_xz", r.i_xz},       {"I_yz", r.i_yz},
           {"residual", r.residual}, {"cpu_ms", r.cpu_ms}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline Json certificate_to_json(const Certificate& cert) {
    Json profile = Json::array();
    for (const RhoSample& s : cert.rho_profile) profile.push_back({{"alpha", s.alpha}, {"rho1", s.rho1}, {"rho2", s.rho2}});
    Json j{{"kappa", cert.kappa},
           {"kappa_y", cert.kappa_y},
           {"gamma_beta", cert.gamma_beta},
           {"eta_z", cert.eta_z},
           {"alpha_threshold", std::isnan(cert.alpha_threshold) ? Json(nullptr) : Json(cert.alpha_threshold)},
           {"rho3", cert.rho3},
           {"feasible", cert.feasible},
           {"feasible_alpha", cert.feasible_alpha ? Json(*cert.feasible_alpha) : Json(nullptr)},
           {"rho_profile", std::move(profile)}};
    if (!cert.diagnostic.empty()) j["diagnostic"] = cert.diagnostic;
    return j;
}

/// One JSON object per recorded iteration, tagged with the run's identity.
inline void write_trace_jsonl(std::ostream& out, const RunRecord& run, const IterationTrace& trace) {
    for (const TracePoint& pt : trace.points) {
        Json j{{"method", run.method},
               {"beta", run.beta},
               {"c", run.c},
               {"omega", run.omega},
               {"seed", run.seed},
               {"iteration", pt.iteration},
               {"residual", pt.residual},
               {"lagrangian", std::isfinite(pt.lagrangian) ? Json(pt.lagrangian) : Json(nullptr)},
               {"I_xz", pt.i_xz},
               {"I_yz", pt.i_yz}};
        if (pt.p_z) j["p_z"] = vec_to_json(*pt.p_z);
        if (pt.mu_z) j["mu_z"] = vec_to_json(*pt.mu_z);
        out << j.dump() << '\n';
    }
}

}  // namespace ibadmm

#endif  // IBADMM_IO_HPP
