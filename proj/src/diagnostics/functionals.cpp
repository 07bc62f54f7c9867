#include <algorithm>
#include <cmath>

#include "vmfp/core/calculus.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/core/moments.hpp"
#include "vmfp/core/velocity.hpp"
#include "vmfp/diagnostics/diagnostics.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"
#include "vmfp/limit/limit.hpp"

namespace vmfp {

double convex_gauge(double s) {
    if (s <= 0.0) return 1.0;
    return s * std::log(s) - s + 1.0;
}

double relative_gauge(double g, double g0) {
    if (g <= 0.0) return g0;
    return g * std::log(g / std::max(g0, kLogFloor)) - g + g0;
}

double free_energy(const DistributionField& f, const EMState& em, const PlasmaParams& params) {
    const VelGrid& vg = f.vgrid();
    const int nv = vg.nv();
    std::vector<double> e(vg.size());
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
            for (int c = 0; c < nv; ++c) {
                const double x = vg.node(a), y = vg.node(b), z = vg.node(c);
                e[vg.index(a, b, c)] = 0.5 * (x * x + y * y + z * z);
            }
    double s = 0.0;
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        const double* p = f.node(ix);
        for (std::size_t k = 0; k < e.size(); ++k) {
            const double v = p[k];
            if (v > 0.0) s += v * (params.sigma * std::log(std::max(v, kLogFloor)) + e[k]);
        }
    }
    return s * f.phase_volume() + field_energy(em, params);
}

double dissipation(const DistributionField& f, const PlasmaParams& params) {
    const VelGrid& vg = f.vgrid();
    const int nv = vg.nv();
    const double h = vg.h();
    const auto M = sampled_maxwellian(vg, params.sigma);
    std::vector<double> g(vg.size());
    const std::size_t stride[3] = {static_cast<std::size_t>(nv) * nv, static_cast<std::size_t>(nv), 1};
    double total = 0.0;
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        const double* p = f.node(ix);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = p[k] / M[k];
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b)
                for (int c = 0; c < nv; ++c) {
                    const std::size_t k = vg.index(a, b, c);
                    if (p[k] < kLogFloor) continue;
                    const int idx[3] = {a, b, c};
                    double grad2 = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        const int i = idx[d];
                        const std::size_t s = stride[d];
                        double dg;
                        if (i == 0) dg = (g[k + s] - g[k]) / h;
                        else if (i == nv - 1) dg = (g[k] - g[k - s]) / h;
                        else dg = (g[k + s] - g[k - s]) / (2.0 * h);
                        grad2 += dg * dg;
                    }
                    total += M[k] * grad2 / g[k];
                }
    }
    return params.sigma * params.sigma * total * f.phase_volume();
}

double modulated_energy(const ScalarField& kin_n, const VectorField& kin_E,
                        const VectorField& kin_B, const LimitState& lim,
                        const PlasmaParams& params) {
    const PerpGrid& g = kin_n.grid();
    require_same_grid(g, lim.n.grid(), "modulated_energy");
    require_same_grid(g, kin_E.grid(), "modulated_energy");
    require_same_grid(g, kin_B.grid(), "modulated_energy");
    if (lim.n.min() < 1e-12) throw PositivityError("modulated_energy: limit concentration below floor");
    double rel = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) rel += lim.n[p] * convex_gauge(kin_n[p] / lim.n[p]);
    rel *= params.sigma * g.cell_area();
    const double dE = (kin_E - lim.E).squared_integral();
    VectorField epsB1(g);
    epsB1[2] = params.eps * lim.b1;
    const double dB = (kin_B - epsB1).squared_integral();
    return rel + params.eps0 / (2.0 * params.m) * dE + 1.0 / (2.0 * params.mu0 * params.m) * dB;
}

double kinetic_relative_entropy(const DistributionField& f, const PlasmaParams& params) {
    const auto M = grid_maxwellian(f.vgrid(), params.sigma);
    const ScalarField n = density(f);
    double s = 0.0;
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        if (n[ix] <= 0.0) continue;
        const double* p = f.node(ix);
        for (std::size_t k = 0; k < M.size(); ++k) s += relative_gauge(p[k], n[ix] * M[k]);
    }
    return params.sigma * s * f.phase_volume();
}

double l1_to_local_equilibrium(const DistributionField& f, const ScalarField& n,
                               const PlasmaParams& params) {
    require_same_grid(f.xgrid(), n.grid(), "l1_to_local_equilibrium");
    const auto M = grid_maxwellian(f.vgrid(), params.sigma);
    double s = 0.0;
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        const double* p = f.node(ix);
        for (std::size_t k = 0; k < M.size(); ++k) s += std::abs(p[k] - n[ix] * M[k]);
    }
    return s * f.phase_volume();
}

KullbackCheck csiszar_kullback_check(const std::vector<double>& g, const std::vector<double>& g0,
                                     double measure) {
    if (g.size() != g0.size()) throw ShapeError("csiszar_kullback_check: size mismatch");
    double l1 = 0.0, m = 0.0, m0 = 0.0, ent = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] < 0.0 || g0[k] < 0.0) throw PositivityError("csiszar_kullback_check: negative input");
        l1 += std::abs(g[k] - g0[k]);
        m += g[k];
        m0 += g0[k];
        ent += relative_gauge(g[k], g0[k]);
    }
    KullbackCheck r;
    r.lhs = l1 * measure;
    r.rhs = 2.0 * std::sqrt(std::max(m, m0) * measure) * std::sqrt(std::max(ent, 0.0) * measure);
    return r;
}

KullbackCheck csiszar_kullback_check(const ScalarField& g, const ScalarField& g0) {
    require_same_grid(g.grid(), g0.grid(), "csiszar_kullback_check");
    return csiszar_kullback_check(g.values(), g0.values(), g.grid().cell_area());
}

KullbackCheck csiszar_kullback_check(const DistributionField& g, const DistributionField& g0) {
    require_same_grid(g.xgrid(), g0.xgrid(), "csiszar_kullback_check");
    return csiszar_kullback_check(g.values(), g0.values(), g.phase_volume());
}

MomentResidual moment_residual(const std::vector<DistributionField>& f_history,
                               const std::vector<EMState>& em_history,
                               const PlasmaParams& params) {
    if (f_history.size() < 3 || em_history.size() < 3)
        throw StateError("moment_residual: need at least three stored time levels");
    const std::size_t k = f_history.size() - 1, ke = em_history.size() - 1;
    const DistributionField& f0 = f_history[k - 2];
    const DistributionField& f1 = f_history[k - 1];
    const DistributionField& f2 = f_history[k];
    const EMState& em1 = em_history[ke - 1];
    const double dt = f1.time() - f0.time();
    if (!(dt > 0.0) || std::abs((f2.time() - f1.time()) - dt) > 1e-9 * dt)
        throw StateError("moment_residual: snapshots must be equally spaced in time");
    if (std::abs(em1.t - f1.time()) > 1e-9 * dt)
        throw StateError("moment_residual: field and distribution snapshots are not aligned");

    const PerpGrid& g = f1.xgrid();
    const Moments mo = moments(f1);
    const VectorField j0 = current(f0), j2 = current(f2);
    const double eps = params.eps, qm = params.q / params.m;

    MomentResidual r{VectorField(g), VectorField(g)};
    for (int b = 0; b < 3; ++b) {
        // div_x of the stress-like tensor, x3 derivatives vanish
        ScalarField T1 = mo.stress[0][b], T2 = mo.stress[1][b];
        if (b == 0) T1 -= params.sigma * mo.n;
        if (b == 1) T2 -= params.sigma * mo.n;
        const ScalarField divT = partial(T1, 0) + partial(T2, 1);
        const ScalarField divP = partial(mo.stress[0][b], 0) + partial(mo.stress[1][b], 1);
        for (std::size_t p = 0; p < g.size(); ++p) {
            const double dtj = eps * (j2[b][p] - j0[b][p]) / (2.0 * dt);
            const double relax = mo.j[b][p] / params.tau;
            r.F[b][p] = divT[p] + dtj + relax;

            const double J[3] = {mo.j[0][p], mo.j[1][p], mo.j[2][p]};
            const double B[3] = {em1.B[0][p], em1.B[1][p], em1.B[2][p]};
            const double jxB = J[(b + 1) % 3] * B[(b + 2) % 3] - J[(b + 2) % 3] * B[(b + 1) % 3];
            const double jxe = b == 0 ? J[1] : (b == 1 ? -J[0] : 0.0);
            r.law[b][p] = dtj + divP[p] - qm * (mo.n[p] * em1.E[b][p] + jxB) -
                          qm / eps * params.b_ext[p] * jxe + relax;
        }
    }
    r.F_norm = r.F.l2_norm();
    r.law_norm = r.law.l2_norm();
    return r;
}

DiagnosticsRecord kinetic_record(const DistributionField& f, const EMState& em,
                                 const PlasmaParams& params, const LimitState* ref) {
    DiagnosticsRecord r;
    r.t = f.time();
    r.eps = params.eps;
    r.mass = f.mass();
    r.kinetic_energy = kinetic_energy(f);
    r.field_energy = field_energy(em, params);
    r.free_energy = free_energy(f, em, params);
    r.entropy_dissipation = dissipation(f, params) / (params.eps * params.tau);
    r.kinetic_relative_entropy = kinetic_relative_entropy(f, params);
    const ScalarField n = density(f);
    if (ref) {
        r.modulated_energy = modulated_energy(n, em.E, em.B, *ref, params);
        r.l1_distance = l1_to_local_equilibrium(f, ref->n, params);
    } else {
        r.l1_distance = l1_to_local_equilibrium(f, n, params);
    }
    r.gauss_residual = gauss_residual(em.E, charge_density(n, params), params);
    r.flux_equivalence_residual = n.min() >= 1e-12 ? flux_equivalence_residual(n, em.E, params) : 0.0;
    return r;
}

DiagnosticsRecord limit_record(const LimitState& s, const PlasmaParams& params) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.eps = 0.0;
    r.mass = s.n.integral();
    r.kinetic_energy = 1.5 * params.sigma * r.mass;
    r.field_energy = params.eps0 / (2.0 * params.m) * s.E.squared_integral();
    r.free_energy = limit_free_energy(s, params);
    r.gauss_residual = gauss_residual(s.E, charge_density(s.n, params), params);
    r.flux_equivalence_residual = s.n.min() >= 1e-12 ? flux_equivalence_residual(s.n, s.E, params) : 0.0;
    return r;
}

BoundCheck kinetic_energy_bound_check(const std::vector<DiagnosticsRecord>& records,
                                      const PlasmaParams& params, double M0, double U0) {
    if (records.empty()) throw StateError("kinetic_energy_bound_check: empty history");
    BoundCheck b;
    b.margin = INFINITY;
    for (const auto& r : records) {
        // Energies are differenced before scaling by eps: at t = 0 the bound is an equality and
        // a fused eps * U0 + growth would otherwise round differently from eps * (KE + W).
        const double excess = (r.kinetic_energy + r.field_energy) - U0;
        const double allowance = 3.0 * params.sigma / params.tau * r.t * M0 / params.eps;
        b.margin = std::min(b.margin, params.eps * (allowance - excess));
    }
    b.ok = b.margin >= 0.0;
    return b;
}

}  // namespace vmfp
