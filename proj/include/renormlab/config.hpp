#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "renormlab/errors.hpp"

namespace renormlab {

enum class Precision { Double, Extended };

struct RunConfig {
    // series resolution
    int degree_1d = 160;
    int degree_2d_x = 24;
    int degree_2d_y = 12;

    // Domains. The paper fixes none of these numerically; the Z-chart center
    // is forced off the real axis by the singularities of eta* at
    // ~1.003 e^{+-0.528 i} (boundary-arc continuation past the critical value).
    double r_z = 0.7;
    double r_w = 0.8;
    double z0_re = 0.5;
    double z0_im = -0.35;
    double r2_x = 0.7;   // Omega x-chart radius, centered at z0
    double r2_w = 0.75;  // Gamma x-chart radius, centered at 0
    double r2_y = 0.6;

    // tolerances
    double newton_tol = 1e-11;
    int newton_max_iters = 50;
    double fd_step = 1e-7;
    double defect_tol = 1e-8;
    double deriv_tol = 1e-10;
    double crit_tol = 1e-13;
    double crit_radius = 0.3;
    double domain_slack = 4.0;

    // experiment parameters
    double nu = 0.2;
    int level = 6;
    int warmup_1d = 10;
    Precision precision = Precision::Double;
    // switch Henon orbits to extended scalars once ||R^n Sigma||_y drops
    // below this floor and more levels are requested
    double extended_floor = 1e-12;

    std::string out_dir = ".";
    std::string fp_path = "fixedpoint.json";

    int threads() const {
        if (const char* env = std::getenv("RENORM_THREADS")) {
            const int n = std::atoi(env);
            if (n > 0) return n;
        }
        return 1;
    }

    void validate() const {
        if (degree_1d < 8 || degree_2d_x < 4 || degree_2d_y < 2)
            fail(ErrorKind::Validation, "series degrees too small");
        if (r_z <= 0 || r_w <= 0 || r2_x <= 0 || r2_w <= 0 || r2_y <= 0)
            fail(ErrorKind::Validation, "radii must be positive");
        if (newton_tol <= 0 || defect_tol <= 0 || deriv_tol <= 0 || crit_tol <= 0)
            fail(ErrorKind::Validation, "tolerances must be positive");
        if (level < 0 || level > 12) fail(ErrorKind::Validation, "level budget must be in [0, 12]");
        if (!(std::abs(nu) < 1.0)) fail(ErrorKind::Validation, "|nu| must be < 1");
    }
};

// FNV-1a over the canonical config rendering; used in run manifests.
inline std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace renormlab
