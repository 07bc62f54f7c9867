#include "vmfp/core/params.hpp"

#include <cmath>
#include <string>

#include "vmfp/core/errors.hpp"

namespace vmfp {

PlasmaParams PlasmaParams::uniform(const PerpGrid& grid, double b0, double d0) {
    PlasmaParams p;
    p.b_ext = ScalarField(grid, b0);
    p.d_background = ScalarField(grid, d0);
    return p;
}

ScalarField PlasmaParams::omega_c() const { return (q / m) * b_ext; }

double PlasmaParams::omega_c_max() const { return q / m * b_ext.max(); }

void PlasmaParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParameterError(std::string("PlasmaParams: ") + name + " must be positive");
    };
    positive(q, "q");
    positive(m, "m");
    positive(sigma, "sigma");
    positive(tau, "tau");
    positive(eps0, "eps0");
    positive(mu0, "mu0");
    positive(eps, "eps");
    if (eps > 1.0) throw ParameterError("PlasmaParams: eps must lie in (0, 1]");
    if (b_ext.size() == 0 || d_background.size() == 0)
        throw ParameterError("PlasmaParams: b_ext and d_background must be sampled");
    require_same_grid(b_ext.grid(), d_background.grid(), "PlasmaParams");
    if (!(b_ext.min() > 0.0))
        throw ParameterError("PlasmaParams: B_ext must be bounded below by a positive constant");
    if (d_background.min() < 0.0)
        throw ParameterError("PlasmaParams: background D must be nonnegative");
}

}  // namespace vmfp
