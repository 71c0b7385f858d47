#ifndef THETAFORGE_REPORT_HPP
#define THETAFORGE_REPORT_HPP

#include <json.hpp>
#include <string>

namespace thetaforge {

/// Structured residual record for one verified identity instance.
struct IdentityReport {
    std::string identity;
    int genus = 0;
    int level = 0;
    std::uint64_t seed = 0;
    nlohmann::json inputs; // tau digest, characteristics, z/w values
    double residual = 0.0;
    double scale = 1.0;
    double tolerance = 1e-8;
    bool pass = false;
    bool degraded = false;
    double wall_ms = 0.0;

    void finish(double tol) {
        tolerance = tol;
        pass = residual < tol;
    }
};

nlohmann::json to_json(const IdentityReport& r);

} // namespace thetaforge

#endif
