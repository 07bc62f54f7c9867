#include "vmfp/limit/limit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vmfp/core/errors.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

namespace {

constexpr double kFloor = 1e-12;

void require_positive(const ScalarField& n, const char* where) {
    if (n.min() < kFloor) throw PositivityError(std::string(where) + ": concentration below floor");
}

double limited_slope(double dm, double dp, Limiter lim) {
    switch (lim) {
        case Limiter::Minmod:
            if (dm * dp <= 0.0) return 0.0;
            return std::abs(dm) < std::abs(dp) ? dm : dp;
        case Limiter::VanLeer:
            return dm * dp <= 0.0 ? 0.0 : 2.0 * dm * dp / (dm + dp);
        case Limiter::Koren: {
            // phi(r) = max(0, min(2r, (1+2r)/3, 2)) applied to the upwind slope dm
            if (dm * dp <= 0.0) return 0.0;
            const double r = dp / dm;
            return dm * std::max(0.0, std::min({2.0 * r, (1.0 + 2.0 * r) / 3.0, 2.0}));
        }
        case Limiter::Positivity:
            break;
    }
    return (dm + 2.0 * dp) / 3.0;
}

// Face states on a periodic line of length len with stride st. For cell i, right[i] is
// the state at its right face and left[i] the state at its left face.
void reconstruct(const double* n, int len, std::size_t st, Limiter lim, double* left,
                 double* right) {
    for (int i = 0; i < len; ++i) {
        const double um = n[((i + len - 1) % len) * st], u0 = n[i * st], up = n[((i + 1) % len) * st];
        const double dm = u0 - um, dp = up - u0;
        double r = u0 + 0.5 * limited_slope(dm, dp, lim);
        double l = u0 - 0.5 * limited_slope(dp, dm, lim);
        if (lim == Limiter::Positivity) {
            const double lo = std::min(l, r);
            if (lo < 0.0 && u0 > lo) {
                const double theta = u0 / (u0 - lo);
                r = u0 + theta * (r - u0);
                l = u0 + theta * (l - u0);
            }
        }
        left[i] = l;
        right[i] = r;
    }
}

VectorField drift_field(const ScalarField& n, const PlasmaParams& params) {
    const ScalarField rho = charge_density(n, params);
    const PoissonSolution ps = solve_poisson(rho, params);
    return drift_velocity(n, ps.E, params).total;
}

/// -dt div(n V) by upwind fluxes through faces, with face velocities averaged from nodes.
/// Fluxes leaving a cell are scaled down together when they would take out more than the
/// cell holds, which keeps every forward-Euler stage, and so the SSP-RK3 step, nonnegative.
ScalarField increment(const ScalarField& n, double dt, const PlasmaParams& params, Limiter lim) {
    const PerpGrid& g = n.grid();
    const int n1 = g.n1(), n2 = g.n2();
    const double h1 = g.h1(), h2 = g.h2();
    const VectorField V = drift_field(n, params);
    // F1 at face (i + 1/2, j), F2 at face (i, j + 1/2), both as amounts dt F / h
    ScalarField F1(g), F2(g);
    std::vector<double> l(std::max(n1, n2)), r(std::max(n1, n2));
    for (int j = 0; j < n2; ++j) {
        reconstruct(n.data() + j, n1, n2, lim, l.data(), r.data());
        for (int i = 0; i < n1; ++i) {
            const int ip = (i + 1) % n1;
            const double v = 0.5 * (V[0].at(i, j) + V[0].at(ip, j));
            F1.at(i, j) = dt / h1 * (v > 0.0 ? v * r[i] : v * l[ip]);
        }
    }
    for (int i = 0; i < n1; ++i) {
        reconstruct(n.data() + g.index(i, 0), n2, 1, lim, l.data(), r.data());
        for (int j = 0; j < n2; ++j) {
            const int jp = (j + 1) % n2;
            const double v = 0.5 * (V[1].at(i, j) + V[1].at(i, jp));
            F2.at(i, j) = dt / h2 * (v > 0.0 ? v * r[j] : v * l[jp]);
        }
    }
    ScalarField scale(g, 1.0);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const int im = (i + n1 - 1) % n1, jm = (j + n2 - 1) % n2;
            const double out = std::max(F1.at(i, j), 0.0) + std::max(-F1.at(im, j), 0.0) +
                               std::max(F2.at(i, j), 0.0) + std::max(-F2.at(i, jm), 0.0);
            const double have = std::max(n.at(i, j), 0.0);
            if (out > have) scale.at(i, j) = have / out;
        }
    ScalarField inc(g);
    for (int i = 0; i < n1; ++i) {
        const int ip = (i + 1) % n1;
        for (int j = 0; j < n2; ++j) {
            const int jp = (j + 1) % n2;
            double f1 = F1.at(i, j), f2 = F2.at(i, j);
            f1 *= f1 > 0.0 ? scale.at(i, j) : scale.at(ip, j);
            f2 *= f2 > 0.0 ? scale.at(i, j) : scale.at(i, jp);
            inc.at(i, j) -= f1 + f2;
            inc.at(ip, j) += f1;
            inc.at(i, jp) += f2;
        }
    }
    return inc;
}

}  // namespace

VectorField compute_k(const ScalarField& n, const VectorField& E, const PlasmaParams& params,
                      DiffScheme scheme) {
    require_same_grid(n.grid(), E.grid(), "compute_k");
    require_positive(n, "compute_k");
    const VectorField gn = gradient(n, scheme);
    VectorField k(n.grid());
    const double qm = params.q / params.m;
    for (std::size_t p = 0; p < n.size(); ++p) {
        k[0][p] = params.sigma * gn[0][p] / n[p] - qm * E[0][p];
        k[1][p] = params.sigma * gn[1][p] / n[p] - qm * E[1][p];
    }
    return k;
}

DriftDecomposition drift_velocity(const ScalarField& n, const VectorField& E,
                                  const PlasmaParams& params, DiffScheme scheme) {
    require_same_grid(n.grid(), E.grid(), "drift_velocity");
    require_same_grid(n.grid(), params.grid(), "drift_velocity");
    const PerpGrid& g = n.grid();
    const ScalarField wc = params.omega_c();
    const VectorField gw = gradient(wc, scheme);
    DriftDecomposition d{VectorField(g), VectorField(g), VectorField(g), VectorField(g)};
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double B = params.b_ext[p];
        d.v_exb[0][p] = E[1][p] / B;
        d.v_exb[1][p] = -E[0][p] / B;
        const double s = params.sigma / (wc[p] * wc[p]);
        d.v_gd[0][p] = -s * gw[1][p];
        d.v_gd[1][p] = s * gw[0][p];
    }
    d.total = d.v_exb + d.v_gd + d.v_cd;
    return d;
}

LimitState limit_initial_state(const ScalarField& n0, const PlasmaParams& params) {
    params.validate();
    require_same_grid(n0.grid(), params.grid(), "limit_initial_state");
    if (n0.min() < 0.0) throw PositivityError("limit_initial_state: negative concentration");
    LimitState s(n0.grid(), 0.0);
    s.n = n0;
    s.E = solve_poisson(charge_density(n0, params), params).E;
    return s;
}

double limit_cfl_number(const LimitState& state, const PlasmaParams& params, double dt) {
    const VectorField V = drift_velocity(state.n, state.E, params).total;
    double vmax = 0.0;
    for (std::size_t p = 0; p < state.n.size(); ++p)
        vmax = std::max(vmax, std::max(std::abs(V[0][p]), std::abs(V[1][p])));
    return dt * vmax / state.n.grid().min_spacing();
}

LimitState limit_step(const LimitState& state, double dt, const PlasmaParams& params,
                      const LimitOptions& options) {
    if (!(dt > 0.0)) throw ParameterError("limit_step: dt must be positive");
    const double cfl = limit_cfl_number(state, params, dt);
    if (cfl > options.cfl_max)
        throw StabilityError("limit_step: CFL number " + std::to_string(cfl) + " above limit");
    const Limiter lim = options.limiter;

    // Shu-Osher SSP-RK3 written in increment form: the convex weights 3/4, 1/4 and
    // 1/3, 2/3 round with a bias that shows up as a steady mass drift, while the
    // increments are flux differences whose sum is zero-mean round-off.
    const ScalarField& u0 = state.n;
    const ScalarField k0 = increment(u0, dt, params, lim);
    const ScalarField k1 = increment(u0 + k0, dt, params, lim);
    ScalarField u2 = u0;
    for (std::size_t p = 0; p < u2.size(); ++p) u2[p] += 0.25 * (k0[p] + k1[p]);
    const ScalarField k2 = increment(u2, dt, params, lim);
    ScalarField u3 = u0;
    for (std::size_t p = 0; p < u3.size(); ++p)
        u3[p] += (k0[p] + k1[p]) / 6.0 + (2.0 / 3.0) * k2[p];

    LimitState out(u0.grid(), state.t + dt);
    out.n = std::move(u3);
    out.E = solve_poisson(charge_density(out.n, params), params).E;
    if (options.refresh_b1) {
        VectorField dtE = (1.0 / dt) * (out.E - state.E);
        out.b1 = reconstruct_b1(out.n, out.E, dtE, params, options.b1_div_tolerance);
    } else {
        out.b1 = state.b1;
    }
    return out;
}

double limit_free_energy(const LimitState& state, const PlasmaParams& params) {
    double s = 0.0;
    for (double v : state.n.values()) s += v * std::log(std::max(v, kFloor));
    s *= params.sigma * state.n.grid().cell_area();
    return s + params.eps0 / (2.0 * params.m) * state.E.squared_integral();
}

double flux_equivalence_residual(const ScalarField& n, const VectorField& E,
                                 const PlasmaParams& params, DiffScheme scheme) {
    const PerpGrid& g = n.grid();
    const VectorField k = compute_k(n, E, params, scheme);
    const VectorField V = drift_velocity(n, E, params, scheme).total;
    const ScalarField wc = params.omega_c();
    VectorField raw(g), drift(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        // (n e / omega_c) x k = (n / omega_c) (-k2, k1)
        raw[0][p] = -n[p] / wc[p] * k[1][p];
        raw[1][p] = n[p] / wc[p] * k[0][p];
        drift[0][p] = n[p] * V[0][p];
        drift[1][p] = n[p] * V[1][p];
    }
    const ScalarField rhs_div = divergence(drift, scheme);
    const double num = (divergence(raw, scheme) - rhs_div).l2_norm();
    const double den = rhs_div.l2_norm();
    return den < 1e-14 ? num : num / den;
}

}  // namespace vmfp
