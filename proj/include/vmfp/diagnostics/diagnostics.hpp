#pragma once

#include <vector>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"

namespace vmfp {

/// Floor used inside logarithms and ratios.
inline constexpr double kLogFloor = 1e-30;

/// h(s) = s ln s - s + 1 with h(0) = 1.
double convex_gauge(double s);
/// g0 h(g / g0) written so that g0 = 0 is handled by the floor.
double relative_gauge(double g, double g0);

/// sum (sigma f ln f + |v|^2/2 f) dx dv + field energy, with 0 ln 0 = 0.
double free_energy(const DistributionField& f, const EMState& em, const PlasmaParams& params);

/// sum |sigma grad_v f + v f|^2 / f dx dv, evaluated as sigma^2 M |grad_v (f/M)|^2 / (f/M)
/// with central differences (one-sided on the velocity boundary). Not divided by eps tau.
double dissipation(const DistributionField& f, const PlasmaParams& params);

/// sigma int n h(n_eps / n) + eps0/(2m) int |E_eps - E|^2 + 1/(2 mu0 m) int |B_eps - eps B1|^2
double modulated_energy(const ScalarField& kin_n, const VectorField& kin_E,
                        const VectorField& kin_B, const LimitState& lim,
                        const PlasmaParams& params);

/// sigma sum n_eps M h(f / (n_eps M)) with M the grid-normalized Maxwellian.
double kinetic_relative_entropy(const DistributionField& f, const PlasmaParams& params);

/// sum |f - n M| dx dv against the grid-normalized Maxwellian.
double l1_to_local_equilibrium(const DistributionField& f, const ScalarField& n,
                               const PlasmaParams& params);

struct KullbackCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs <= rhs; }
};

/// ||g - g0||_1 versus 2 max(sqrt(int g0), sqrt(int g)) sqrt(int g0 h(g/g0)).
KullbackCheck csiszar_kullback_check(const std::vector<double>& g, const std::vector<double>& g0,
                                     double measure);
KullbackCheck csiszar_kullback_check(const ScalarField& g, const ScalarField& g0);
KullbackCheck csiszar_kullback_check(const DistributionField& g, const DistributionField& g0);

struct MomentResidual {
    /// div_x int (sigma grad_v f + v f) x v dv + eps d_t j + j / tau
    VectorField F;
    /// eps d_t j + div P - (q/m)(n E + j x B) - (q/(m eps)) B_ext j x e + j / tau
    VectorField law;
    double F_norm = 0.0;
    double law_norm = 0.0;
};

/// Uses the last three snapshots (equally spaced in time) and evaluates at the middle one.
MomentResidual moment_residual(const std::vector<DistributionField>& f_history,
                               const std::vector<EMState>& em_history,
                               const PlasmaParams& params);

struct DiagnosticsRecord {
    double t = 0.0;
    double eps = 0.0;
    double mass = 0.0;
    double kinetic_energy = 0.0;
    double field_energy = 0.0;
    double free_energy = 0.0;
    double entropy_dissipation = 0.0;
    double modulated_energy = 0.0;
    double kinetic_relative_entropy = 0.0;
    double l1_distance = 0.0;
    double gauss_residual = 0.0;
    double flux_equivalence_residual = 0.0;
};

/// All functionals of a kinetic state. When ref is given, modulated energy and the L1
/// distance compare against it; otherwise the modulated energy is 0 and the L1 distance
/// is taken to the local equilibrium n_eps M.
DiagnosticsRecord kinetic_record(const DistributionField& f, const EMState& em,
                                 const PlasmaParams& params, const LimitState* ref = nullptr);

/// Limit-model record: kinetic_energy holds the Maxwellian closure 3 sigma/2 int n,
/// eps is 0 and the kinetic-only columns are 0.
DiagnosticsRecord limit_record(const LimitState& state, const PlasmaParams& params);

struct BoundCheck {
    bool ok = true;
    double margin = 0.0;
};

/// Worst margin of eps (KE + W)(t) <= eps U0 + (3 sigma / tau) t M0 over the records.
BoundCheck kinetic_energy_bound_check(const std::vector<DiagnosticsRecord>& records,
                                      const PlasmaParams& params, double M0, double U0);

}  // namespace vmfp
