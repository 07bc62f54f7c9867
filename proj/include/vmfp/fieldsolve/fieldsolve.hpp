#pragma once

#include "vmfp/core/field.hpp"
#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"

namespace vmfp {

struct PoissonSolution {
    ScalarField phi;
    VectorField E;
};

/// q (n - D)
ScalarField charge_density(const ScalarField& n, const PlasmaParams& params);

/// Throws NeutralityViolation when |mean rho| exceeds 1e-8 of the charge scale
/// rms(rho) + q * mean(D).
void require_neutral(const ScalarField& rho, const PlasmaParams& params, const char* where);

/// -eps0 Lap phi = rho with zero-mean phi; E = -grad phi.
PoissonSolution solve_poisson(const ScalarField& rho, const PlasmaParams& params);

enum class MaxwellScheme { CrankNicolson, Explicit };

struct MaxwellOptions {
    MaxwellScheme scheme = MaxwellScheme::CrankNicolson;
    double cfl_safety = 0.9;
};

/// c_safety * eps * sqrt(mu0 eps0) * min(h1, h2) / pi
double maxwell_cfl_limit(const PerpGrid& grid, const PlasmaParams& params, double safety);

/// One step of mu0 eps0 eps dE/dt = curl B - mu0 J, eps dB/dt = -curl E, where J is the
/// charge current density q * sum v f dv. Each Fourier mode is advanced exactly by the
/// trapezoidal rule (default) or by a Stormer-Verlet split (Explicit).
EMState maxwell_step(const EMState& em, const VectorField& J, const PlasmaParams& params,
                     double dt, const MaxwellOptions& options = {});

/// E <- E + grad psi with Lap psi = rho/eps0 - div E, restricted to modes the discrete
/// divergence can see.
EMState gauss_project(const EMState& em, const ScalarField& rho, const PlasmaParams& params);

/// || eps0 div E - rho ||_2
double gauss_residual(const VectorField& E, const ScalarField& rho, const PlasmaParams& params);

/// || div B ||_2
double div_b_norm(const VectorField& B);

/// eps0/(2m) int |E|^2 + 1/(2 mu0 m) int |B|^2
double field_energy(const EMState& em, const PlasmaParams& params);

/// Third component of B1 solving curl B1 = R, R = mu0 eps0 dtE + mu0 q (n e/omega_c) x k[n],
/// with zero mean. Throws ConsistencyError when ||div R|| / ||grad R|| exceeds div_tolerance.
ScalarField reconstruct_b1(const ScalarField& n, const VectorField& E, const VectorField& dtE,
                           const PlasmaParams& params, double div_tolerance = 5e-2);

}  // namespace vmfp
