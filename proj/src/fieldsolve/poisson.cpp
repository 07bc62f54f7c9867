#include <cmath>
#include <string>

#include "vmfp/core/calculus.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/core/spectral.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

ScalarField charge_density(const ScalarField& n, const PlasmaParams& params) {
    require_same_grid(n.grid(), params.d_background.grid(), "charge_density");
    return params.q * (n - params.d_background);
}

void require_neutral(const ScalarField& rho, const PlasmaParams& params, const char* where) {
    const double mean = rho.mean();
    double rms = 0.0;
    for (double v : rho.values()) rms += v * v;
    rms = std::sqrt(rms / static_cast<double>(rho.size()));
    const double scale = rms + std::abs(params.q) * std::abs(params.d_background.mean());
    if (std::abs(mean) > 1e-8 * scale)
        throw NeutralityViolation(std::string(where) + ": charge density has nonzero mean " +
                                      std::to_string(mean), mean);
}

PoissonSolution solve_poisson(const ScalarField& rho, const PlasmaParams& params) {
    require_same_grid(rho.grid(), params.grid(), "solve_poisson");
    require_neutral(rho, params, "solve_poisson");
    const PerpGrid& g = rho.grid();
    Spectrum sp = forward(rho);
    for (int i = 0; i < sp.n1(); ++i)
        for (int j = 0; j < sp.n2h(); ++j) {
            const double k1 = wavenumber1(g, i), k2 = wavenumber2(g, j);
            const double k2sum = k1 * k1 + k2 * k2;
            sp.at(i, j) = k2sum > 0.0 ? sp.at(i, j) / (params.eps0 * k2sum) : 0.0;
        }
    PoissonSolution out;
    out.phi = inverse(sp);
    out.E = -1.0 * gradient(out.phi);
    return out;
}

EMState gauss_project(const EMState& em, const ScalarField& rho, const PlasmaParams& params) {
    require_same_grid(em.E.grid(), rho.grid(), "gauss_project");
    require_neutral(rho, params, "gauss_project");
    const PerpGrid& g = rho.grid();
    const std::complex<double> I(0.0, 1.0);
    Spectrum r = forward(rho), e1 = forward(em.E[0]), e2 = forward(em.E[1]);
    for (int i = 0; i < r.n1(); ++i)
        for (int j = 0; j < r.n2h(); ++j) {
            const double k1 = derivative_wavenumber1(g, i), k2 = derivative_wavenumber2(g, j);
            const double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0) continue;
            const auto defect = r.at(i, j) / params.eps0 - I * (k1 * e1.at(i, j) + k2 * e2.at(i, j));
            const auto psi = -defect / kk;
            e1.at(i, j) += I * k1 * psi;
            e2.at(i, j) += I * k2 * psi;
        }
    EMState out = em;
    out.E[0] = inverse(e1);
    out.E[1] = inverse(e2);
    return out;
}

double gauss_residual(const VectorField& E, const ScalarField& rho, const PlasmaParams& params) {
    return (params.eps0 * divergence(E) - rho).l2_norm();
}

double div_b_norm(const VectorField& B) { return divergence(B).l2_norm(); }

double field_energy(const EMState& em, const PlasmaParams& params) {
    return params.eps0 / (2.0 * params.m) * em.E.squared_integral() +
           1.0 / (2.0 * params.mu0 * params.m) * em.B.squared_integral();
}

}  // namespace vmfp
