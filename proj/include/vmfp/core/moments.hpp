#pragma once

#include <array>

#include "vmfp/core/field.hpp"
#include "vmfp/core/state.hpp"

namespace vmfp {

struct Moments {
    ScalarField n;
    VectorField j;
    /// stress[a][b] = sum v_a v_b f dv
    std::array<std::array<ScalarField, 3>, 3> stress;
    /// sum |v|^2/2 f dv
    ScalarField energy;
};

Moments moments(const DistributionField& f);

ScalarField density(const DistributionField& f);
/// Particle flux sum v f dv (not multiplied by q).
VectorField current(const DistributionField& f);
/// Total kinetic energy sum |v|^2/2 f dx dv.
double kinetic_energy(const DistributionField& f);

}  // namespace vmfp
