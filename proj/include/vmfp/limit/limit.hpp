#pragma once

#include "vmfp/core/calculus.hpp"
#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"

namespace vmfp {

struct DriftDecomposition {
    VectorField v_exb;  ///< E x e / B
    VectorField v_gd;   ///< -sigma grad(omega_c) x e / omega_c^2
    VectorField v_cd;   ///< curvature drift, zero for a constant direction e
    VectorField total;
};

/// k[n] = sigma grad n / n - (q/m) E. Throws PositivityError when min n < 1e-12.
VectorField compute_k(const ScalarField& n, const VectorField& E, const PlasmaParams& params,
                      DiffScheme scheme = DiffScheme::Spectral);

DriftDecomposition drift_velocity(const ScalarField& n, const VectorField& E,
                                  const PlasmaParams& params,
                                  DiffScheme scheme = DiffScheme::Spectral);

enum class Limiter {
    /// third-order upwind-biased faces, only rescaled where a face state would go negative
    Positivity,
    Koren,
    VanLeer,
    Minmod,
};

struct LimitOptions {
    Limiter limiter = Limiter::Positivity;
    double cfl_max = 0.9;
    /// Recompute b1 every step from the one-step difference of E.
    bool refresh_b1 = true;
    double b1_div_tolerance = 5e-2;
};

/// Poisson field of n and b1 = 0; n must carry the same mass as D.
LimitState limit_initial_state(const ScalarField& n0, const PlasmaParams& params);

/// dt * max|V| / min(h1, h2) for the drift field of state.n.
double limit_cfl_number(const LimitState& state, const PlasmaParams& params, double dt);

/// One SSP-RK3 finite-volume step of dn/dt + div(n V[n]) = 0 with the Poisson coupling
/// re-solved at every stage. Throws StabilityError when the CFL number exceeds cfl_max.
LimitState limit_step(const LimitState& state, double dt, const PlasmaParams& params,
                      const LimitOptions& options = {});

/// sigma int n ln n + eps0/(2m) int |E|^2
double limit_free_energy(const LimitState& state, const PlasmaParams& params);

/// || div[(n e/omega_c) x k[n]] - div(n V[n]) || / || div(n V[n]) || (absolute when the
/// denominator is below 1e-14). Fourth-order central differences by default, so the
/// identity is checked at a known discrete order well clear of the round-off floor.
double flux_equivalence_residual(const ScalarField& n, const VectorField& E,
                                 const PlasmaParams& params,
                                 DiffScheme scheme = DiffScheme::Central4);

}  // namespace vmfp
