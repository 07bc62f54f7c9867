#pragma once

#include <vector>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

enum class CollisionScheme {
    /// Chang-Cooper symmetric flux with face weights chosen so that the discrete
    /// momentum relaxes at exactly the continuous rate.
    MomentConsistent,
    /// Scharfetter-Gummel / Chang-Cooper Bernoulli weights.
    ChangCooper,
};

struct KineticOptions {
    int interp_order = 3;  ///< 3 (cubic) or 5 (quintic) Lagrange interpolation
    bool monotone = false; ///< clip interpolated values to the enclosing cell's range
    /// Correct mass, momentum and energy of each velocity substep to those of the exact
    /// rigid push-forward; off restores the mass only.
    bool moment_fix = true;
    CollisionScheme collision = CollisionScheme::MomentConsistent;
    MaxwellOptions maxwell;
    int picard_max_iter = 30;
    double picard_tol = 1e-12;
    /// Gauss projection after the Maxwell update in Picard mode.
    bool picard_project = false;

    void validate() const;
};

/// Semi-Lagrangian shift x <- x - (v1, v2) dt / eps with periodic wrap, followed by
/// removal of the two Nyquist lines of every velocity slice (mass-neutral).
DistributionField step_free_transport(const DistributionField& f, double dt, double eps,
                                      const KineticOptions& opt = {});
/// Exact characteristic of dv/ds = q/(m eps) (E + v x B) for the frozen fields of em.
DistributionField step_acceleration(const DistributionField& f, const EMState& em, double dt,
                                    const PlasmaParams& params, const KineticOptions& opt = {});
/// Rotation of the (v1, v2) plane by omega_c(x) dt / eps^2 at every node.
DistributionField step_larmor(const DistributionField& f, double dt, const PlasmaParams& params,
                              const KineticOptions& opt = {});
/// Implicit Fokker-Planck relaxation at rate 1/(eps tau), split over v1, v2, v3.
DistributionField step_collision(const DistributionField& f, double dt,
                                 const PlasmaParams& params, const KineticOptions& opt = {});

// In-place forms used by the stepper.
void apply_free_transport(DistributionField& f, double dt, double eps, const KineticOptions& opt);
void apply_acceleration(DistributionField& f, const EMState& em, double dt,
                        const PlasmaParams& params, const KineticOptions& opt);
void apply_larmor(DistributionField& f, double dt, const PlasmaParams& params,
                  const KineticOptions& opt);
void apply_collision(DistributionField& f, double dt, const PlasmaParams& params,
                     const KineticOptions& opt);

/// Maxwellian-weighted discrete kernel of the collision step for one axis:
/// returns the face weights c_{i+1/2}, i = 0..nv-2.
std::vector<double> collision_face_weights(const VelGrid& vg, double sigma, CollisionScheme s);

/// Periodic convolution with the bump exp(-1/(1-(r/delta)^2)) restricted to r < delta,
/// normalized to unit discrete mass. delta = 0 is the identity.
ScalarField mollify(const ScalarField& s, double delta);
VectorField mollify(const VectorField& v, double delta);
/// Sampled, normalized kernel weights centred at node (0, 0).
ScalarField mollifier_kernel(const PerpGrid& grid, double delta);

}  // namespace vmfp
