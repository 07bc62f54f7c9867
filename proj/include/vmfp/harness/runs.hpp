#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"
#include "vmfp/diagnostics/diagnostics.hpp"
#include "vmfp/harness/config.hpp"
#include "vmfp/harness/scenario.hpp"
#include "vmfp/kinetic/stepper.hpp"

namespace vmfp {

/// Limit snapshots at t_k = k * interval, each carrying its b1.
struct LimitTrajectory {
    PlasmaParams params;
    double interval = 0.0;
    std::vector<LimitState> snapshots;
};

struct LimitRunResult {
    LimitTrajectory trajectory;
    std::vector<DiagnosticsRecord> records;
    StepPlan plan;
};

/// b1 at every snapshot from time differences of E: centred inside, second-order
/// one-sided at both ends, two-point when only two snapshots exist.
void attach_b1(std::vector<LimitState>& snapshots, double interval, const PlasmaParams& params,
               double div_tolerance);

/// Limit model from the config's initial density to T. Writes records.csv, checkpoint,
/// resolved-config.toml and manifest.json into out_dir unless it is empty.
LimitRunResult run_limit(const ScenarioConfig& c, const std::filesystem::path& out_dir = {});

/// b1 of the limit solution at t = 0, from the first snapshots of the limit run (a short
/// probe run when T = 0). Identical to run_limit(c).trajectory.snapshots[0].b1.
ScalarField limit_b1_at_start(const ScenarioConfig& c);

struct KineticRunStats {
    double initial_mass = 0.0;
    /// max over steps of |mass - initial| / initial
    double max_mass_drift = 0.0;
    double min_value = 0.0;
    double max_div_b = 0.0;
    /// || eps0 div E - rho || after every step
    double max_gauss_residual = 0.0;
    /// time integral of dissipation / (eps tau), trapezoidal over steps
    double integrated_dissipation = 0.0;
    /// max over steps of [G(t+dt) - G(t)] / dt with G = free energy + integrated dissipation
    double max_free_energy_rate = 0.0;
    std::size_t max_picard_iterations = 0;
};

struct KineticRunResult {
    PlasmaParams params;
    StepPlan plan;
    DistributionField f;
    EMState em;
    std::vector<DiagnosticsRecord> records;
    KineticRunStats stats;
    BoundCheck energy_bound;
    // Filled when a reference trajectory was supplied.
    double sup_modulated_energy = 0.0;
    double sup_kinetic_relative_entropy = 0.0;
    double ck_max_ratio = 0.0;  ///< max lhs / rhs over the (n_eps, n) snapshots
    std::size_t ck_violations = 0;
};

struct KineticRunOptions {
    /// Limit trajectory sampled at the same record times; B(0) = eps b1(0) is taken from it.
    const LimitTrajectory* reference = nullptr;
    std::filesystem::path out_dir;
    /// Called after every completed step.
    std::function<void(const KineticStepper&)> on_step;
};

KineticRunResult run_kinetic(const ScenarioConfig& c, double eps,
                             const KineticRunOptions& options = {});

}  // namespace vmfp
