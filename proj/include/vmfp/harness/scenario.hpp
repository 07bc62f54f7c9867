#pragma once

#include <cstddef>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"
#include "vmfp/harness/config.hpp"
#include "vmfp/kinetic/kinetic.hpp"
#include "vmfp/limit/limit.hpp"

namespace vmfp {

PerpGrid make_perp_grid(const ScenarioConfig& c);
VelGrid make_vel_grid(const ScenarioConfig& c);

/// Constants from the config, B_ext and D from the selected profile families.
PlasmaParams make_params(const ScenarioConfig& c, double eps);

/// n0 of the selected family: D (1 + a cos(k x1) cos(k x2)) for well_prepared,
/// D for equilibrium and drifting.
ScalarField initial_density(const ScenarioConfig& c, const PlasmaParams& params);

/// n0(x) M(v - u) per node, each node normalized so that its discrete density is n0
/// exactly; u = (drift, 0, 0) for the drifting family and 0 otherwise.
DistributionField initial_distribution(const ScenarioConfig& c, const ScalarField& n0,
                                       const PlasmaParams& params);

/// E from the Poisson equation for n0 and B = (0, 0, eps * b1) (b1 may be null).
EMState initial_fields(const ScalarField& n0, const PlasmaParams& params,
                       const ScalarField* b1 = nullptr);

KineticOptions kinetic_options(const ScenarioConfig& c);
LimitOptions limit_options(const ScenarioConfig& c);

/// Time between two records: T / samples.
double sample_interval(const ScenarioConfig& c);

/// A step count per sample interval and the matching step.
struct StepPlan {
    double dt = 0.0;
    std::size_t steps_per_sample = 0;
    std::size_t samples = 0;
    std::size_t total_steps() const { return steps_per_sample * samples; }
};

/// Either the configured dt or min(T/100, larmor_angle_max eps^2 / max omega_c),
/// shrunk so that it divides the sample interval exactly.
StepPlan kinetic_step_plan(const ScenarioConfig& c, const PlasmaParams& params);
/// Either the configured dt or min(T/100, 0.5 * cfl_max / (max|V| / h)) aligned the same way.
StepPlan limit_step_plan(const ScenarioConfig& c, const LimitState& s0, const PlasmaParams& params);

}  // namespace vmfp
