#include <array>
#include <cmath>
#include <numbers>
#include <spdlog/spdlog.h>

#include "vmfp/core/errors.hpp"
#include "vmfp/core/spectral.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

double maxwell_cfl_limit(const PerpGrid& grid, const PlasmaParams& params, double safety) {
    return safety * params.eps * std::sqrt(params.mu0 * params.eps0) * grid.min_spacing() /
           std::numbers::pi;
}

// Per mode, with unit wavevector kh and t = e3 x kh, the curl couples
// (E_t, B3) and (B_t, E3); the longitudinal parts only see the current.
EMState maxwell_step(const EMState& em, const VectorField& J, const PlasmaParams& params,
                     double dt, const MaxwellOptions& options) {
    require_same_grid(em.E.grid(), J.grid(), "maxwell_step");
    if (!(dt > 0.0)) throw ParameterError("maxwell_step: dt must be positive");
    const PerpGrid& g = em.E.grid();
    const double limit = maxwell_cfl_limit(g, params, options.cfl_safety);
    if (dt > limit) {
        if (options.scheme == MaxwellScheme::Explicit)
            throw StabilityError("maxwell_step: dt above the light-speed CFL limit");
        static bool warned = false;
        if (!warned) {
            spdlog::warn("maxwell_step: dt = {:.3e} above explicit CFL limit {:.3e}; "
                         "trapezoidal update remains stable", dt, limit);
            warned = true;
        }
    }

    using cplx = std::complex<double>;
    const cplx I(0.0, 1.0);
    std::array<Spectrum, 3> E, B, S;
    for (int c = 0; c < 3; ++c) {
        E[c] = forward(em.E[c]);
        B[c] = forward(em.B[c]);
        S[c] = forward(J[c]);
    }
    const double eps = params.eps;
    const double src = 1.0 / (params.eps0 * eps);
    const double h = 0.5 * dt;

    for (int i = 0; i < E[0].n1(); ++i)
        for (int j = 0; j < E[0].n2h(); ++j) {
            const double k1 = derivative_wavenumber1(g, i), k2 = derivative_wavenumber2(g, j);
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            cplx& e1 = E[0].at(i, j);
            cplx& e2 = E[1].at(i, j);
            cplx& e3 = E[2].at(i, j);
            if (kk == 0.0) {
                e1 -= dt * src * S[0].at(i, j);
                e2 -= dt * src * S[1].at(i, j);
                e3 -= dt * src * S[2].at(i, j);
                continue;
            }
            const double kh1 = k1 / kk, kh2 = k2 / kk;
            const double t1 = -kh2, t2 = kh1;
            cplx& b1 = B[0].at(i, j);
            cplx& b2 = B[1].at(i, j);
            cplx& b3 = B[2].at(i, j);

            cplx eL = kh1 * e1 + kh2 * e2, et = t1 * e1 + t2 * e2;
            cplx bL = kh1 * b1 + kh2 * b2, bt = t1 * b1 + t2 * b2;
            const cplx jL = kh1 * S[0].at(i, j) + kh2 * S[1].at(i, j);
            const cplx jt = t1 * S[0].at(i, j) + t2 * S[1].at(i, j);
            const cplx j3 = S[2].at(i, j);

            const double a = kk / (params.mu0 * params.eps0 * eps);  // E' = ... a B
            const double b = kk / eps;                               // B' = ... b E
            eL -= dt * src * jL;
            if (options.scheme == MaxwellScheme::CrankNicolson) {
                const double det = 1.0 + h * h * a * b;
                // TE: et' = -i a b3 - src jt, b3' = -i b et
                const cplx r1 = et - I * h * a * b3 - dt * src * jt;
                const cplx r2 = b3 - I * h * b * et;
                et = (r1 - I * h * a * r2) / det;
                b3 = (r2 - I * h * b * r1) / det;
                // TM: bt' = i b e3, e3' = i a bt - src j3
                const cplx s1 = bt + I * h * b * e3;
                const cplx s2 = e3 + I * h * a * bt - dt * src * j3;
                bt = (s1 + I * h * b * s2) / det;
                e3 = (s2 + I * h * a * s1) / det;
            } else {
                b3 += -I * h * b * et;
                bt += I * h * b * e3;
                et += dt * (-I * a * b3 - src * jt);
                e3 += dt * (I * a * bt - src * j3);
                b3 += -I * h * b * et;
                bt += I * h * b * e3;
            }
            e1 = kh1 * eL + t1 * et;
            e2 = kh2 * eL + t2 * et;
            b1 = kh1 * bL + t1 * bt;
            b2 = kh2 * bL + t2 * bt;
        }

    EMState out(g, em.t + dt);
    for (int c = 0; c < 3; ++c) {
        out.E[c] = inverse(E[c]);
        out.B[c] = inverse(B[c]);
    }
    return out;
}

}  // namespace vmfp
