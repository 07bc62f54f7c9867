#pragma once

#include "vmfp/core/field.hpp"

namespace vmfp {

/// Physical constants, the scaling parameter and the two prescribed profiles.
struct PlasmaParams {
    double q = 1.0;
    double m = 1.0;
    double sigma = 1.0;
    double tau = 1.0;
    double eps0 = 1.0;
    double mu0 = 1.0;
    double eps = 1.0;
    ScalarField b_ext;
    ScalarField d_background;

    /// Uniform profiles B_ext = b0 and D = d0 on the grid.
    static PlasmaParams uniform(const PerpGrid& grid, double b0 = 1.0, double d0 = 1.0);

    const PerpGrid& grid() const { return b_ext.grid(); }

    /// Cyclotron frequency q B_ext / m.
    ScalarField omega_c() const;
    double omega_c_max() const;

    /// Throws ParameterError when a constant is non-positive, B_ext is not bounded
    /// away from zero, D is negative anywhere or the profiles live on different grids.
    void validate() const;
};

}  // namespace vmfp
