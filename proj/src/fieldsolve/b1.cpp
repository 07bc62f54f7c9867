#include <cmath>

#include "vmfp/core/calculus.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/core/spectral.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

ScalarField reconstruct_b1(const ScalarField& n, const VectorField& E, const VectorField& dtE,
                           const PlasmaParams& params, double div_tolerance) {
    const PerpGrid& g = n.grid();
    require_same_grid(g, E.grid(), "reconstruct_b1");
    require_same_grid(g, dtE.grid(), "reconstruct_b1");
    require_same_grid(g, params.grid(), "reconstruct_b1");
    if (n.min() < 1e-12) throw PositivityError("reconstruct_b1: concentration below floor");

    // R = mu0 eps0 dtE + mu0 q (n/omega_c) (-k2, k1) with k = sigma grad n / n - (q/m) E
    const VectorField gn = gradient(n);
    const ScalarField wc = params.omega_c();
    VectorField R(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double k1 = params.sigma * gn[0][p] / n[p] - params.q / params.m * E[0][p];
        const double k2 = params.sigma * gn[1][p] / n[p] - params.q / params.m * E[1][p];
        const double s = params.mu0 * params.q * n[p] / wc[p];
        R[0][p] = params.mu0 * params.eps0 * dtE[0][p] - s * k2;
        R[1][p] = params.mu0 * params.eps0 * dtE[1][p] + s * k1;
    }

    const double dnorm = divergence(R).l2_norm();
    const double cnorm = curl_z(R).l2_norm();
    const double scale = std::sqrt(dnorm * dnorm + cnorm * cnorm);
    // A source that is round-off everywhere (uniform n, E = 0) has no meaningful direction.
    const double natural = params.mu0 * params.q * params.sigma * n.max() / wc.min() *
                           g.length() / g.min_spacing();
    const double rel = scale > 1e-10 * natural ? dnorm / scale : 0.0;
    if (rel > div_tolerance)
        throw ConsistencyError("reconstruct_b1: source is not divergence free", rel);

    // -Lap b1 = curl_z R
    Spectrum sp = forward(curl_z(R));
    for (int i = 0; i < sp.n1(); ++i)
        for (int j = 0; j < sp.n2h(); ++j) {
            const double k1 = derivative_wavenumber1(g, i), k2 = derivative_wavenumber2(g, j);
            const double kk = k1 * k1 + k2 * k2;
            sp.at(i, j) = kk > 0.0 ? sp.at(i, j) / kk : 0.0;
        }
    return inverse(sp);
}

}  // namespace vmfp
