#pragma once

#include <vector>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"
#include "vmfp/kinetic/kinetic.hpp"

namespace vmfp {

/// Energy bookkeeping of the last step (all values are totals over the torus).
struct StepReport {
    double dt = 0.0;
    double kinetic_before = 0.0;
    double kinetic_after = 0.0;
    double field_before = 0.0;
    double field_after = 0.0;
    /// Kinetic energy change produced by the collision substep alone.
    double collision_energy = 0.0;
    /// Picard only: successive-iterate distances, one per iteration.
    std::vector<double> residuals;
};

class KineticStepper {
public:
    KineticStepper(PlasmaParams params, DistributionField f, EMState em,
                   KineticOptions options = {});

    const PlasmaParams& params() const { return params_; }
    const KineticOptions& options() const { return options_; }
    const DistributionField& f() const { return f_; }
    const EMState& em() const { return em_; }
    double time() const { return f_.time(); }
    const StepReport& last_report() const { return report_; }

    /// L(dt/2) T(dt/2) A(dt/2) C(dt) A(dt/2) T(dt/2) L(dt/2), then Maxwell with the
    /// time-centred current and a Gauss projection. Acceleration uses midpoint fields
    /// predicted by a half Maxwell step and a projection onto the midpoint density.
    void strang_step(double dt);

    /// Fixed-point iteration over one step with mollified frozen fields. Throws
    /// IterationError when the cap is reached without meeting the tolerance.
    void picard_cycle(double dt, double delta);

private:
    PlasmaParams params_;
    DistributionField f_;
    EMState em_;
    KineticOptions options_;
    StepReport report_;
};

KineticStepper strang_step(KineticStepper stepper, double dt);
KineticStepper picard_cycle(KineticStepper stepper, double dt, double delta);

}  // namespace vmfp
