#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vmfp {

/// Scenario description read from a TOML-style key/value file with the sections
/// [grid], [params], [initial] and [run]. Every key is optional.
struct ScenarioConfig {
    // [grid]
    int n1 = 32;
    int n2 = 32;
    int nv = 16;
    double length = 6.283185307179586;
    double vmax = 0.0;  ///< 0 selects 6 sqrt(sigma)

    // [params]
    double q = 1.0, m = 1.0, sigma = 1.0, tau = 1.0, eps0 = 1.0, mu0 = 1.0;
    double eps = 0.5;

    // [initial]
    std::string family = "well_prepared";  ///< well_prepared | equilibrium | drifting
    double amplitude = 0.1;                ///< a in n0 = D (1 + a cos(k x1) cos(k x2))
    int mode = 1;
    double drift = 0.0;                    ///< mean velocity along v1 for the drifting family
    std::string background = "cosine";     ///< uniform | cosine
    double background_amplitude = 0.2;     ///< d in D = 1 + d cos(k x1)
    std::string bext = "cosine";           ///< uniform | cosine
    double b0 = 1.0;
    double bext_amplitude = 0.2;           ///< b in B_ext = b0 (1 + b cos(k x1))

    // [run]
    double T = 0.5;
    double dt = 0.0;   ///< 0 selects the automatic policy
    int samples = 100; ///< records per run (plus the initial one)
    std::string out = "out";
    std::string mode_name = "strang";  ///< strang | picard
    std::vector<double> epsilons = {0.4, 0.2, 0.1};
    std::uint64_t seed = 0;
    double larmor_angle_max = 0.25;  ///< cap on omega_c dt / eps^2 per step
    double delta = 0.0;              ///< mollifier radius for picard mode, 0 selects 1.5 h
    int interp_order = 3;
    bool monotone = false;
    bool moment_fix = true;
    std::string collision = "moment_consistent";  ///< moment_consistent | chang_cooper
    std::string limiter = "positivity";           ///< positivity | koren | van_leer | minmod
    int picard_max_iter = 30;
    double picard_tol = 1e-12;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Every field with its resolved value, in the same syntax load_config accepts.
std::string format_config(const ScenarioConfig& c);
void write_resolved_config(const ScenarioConfig& c, const std::filesystem::path& path);

}  // namespace vmfp
