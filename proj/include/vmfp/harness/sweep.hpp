#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vmfp/harness/config.hpp"

namespace vmfp {

struct SweepEntry {
    double eps = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    std::string records;  ///< path of the run's records.csv relative to the manifest
    double sup_modulated_energy = 0.0;
    double sup_kinetic_relative_entropy = 0.0;
    double integrated_dissipation = 0.0;
    double ck_max_ratio = 0.0;
    std::size_t ck_violations = 0;
    double kinetic_energy_margin = 0.0;
    double max_mass_drift = 0.0;
    double min_value = 0.0;
};

struct SweepManifest {
    bool complete = false;
    std::string error;  ///< message of the failure that stopped an incomplete sweep
    std::string mode;
    double T = 0.0;
    int samples = 0;
    int n1 = 0, n2 = 0, nv = 0;
    std::vector<double> epsilons;
    std::string limit_records;
    std::vector<SweepEntry> runs;
    /// Least-squares slope and intercept of log(sup ME) against log(eps); absent with
    /// fewer than two runs or a nonpositive sup.
    std::optional<double> slope;
    std::optional<double> intercept;
};

/// Least-squares fit of log y against log x.
std::optional<std::pair<double, double>> loglog_fit(const std::vector<double>& x,
                                                    const std::vector<double>& y);

/// Runs the limit model once, then the kinetic model for every eps against the same
/// stored limit trajectory. Writes limit/, eps_<k>/ and manifest.json under out_dir
/// unless it is empty. A failing run writes the manifest with complete = false and
/// rethrows.
SweepManifest run_epsilon_sweep(const ScenarioConfig& c, const std::filesystem::path& out_dir = {});

void write_manifest(const SweepManifest& m, const std::filesystem::path& path);
SweepManifest read_manifest(const std::filesystem::path& path);

}  // namespace vmfp
