#include "vmfp/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vmfp/core/errors.hpp"
#include "vmfp/core/velocity.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

namespace {

double wavenumber(const ScenarioConfig& c) { return 2.0 * std::numbers::pi / c.length; }

StepPlan align(double interval, std::size_t samples, double dt_target) {
    StepPlan p;
    p.samples = samples;
    if (interval <= 0.0) {
        p.dt = dt_target;
        p.steps_per_sample = 0;
        return p;
    }
    // Round to the nearest count first so that a dt which already divides the interval
    // (up to round-off) is kept; otherwise take the next finer step.
    const double ratio = interval / dt_target;
    auto k = static_cast<std::size_t>(std::llround(ratio));
    if (k == 0 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio)
        k = static_cast<std::size_t>(std::ceil(ratio));
    p.steps_per_sample = std::max<std::size_t>(k, 1);
    p.dt = interval / static_cast<double>(p.steps_per_sample);
    return p;
}

}  // namespace

PerpGrid make_perp_grid(const ScenarioConfig& c) { return PerpGrid(c.length, c.n1, c.n2); }

VelGrid make_vel_grid(const ScenarioConfig& c) {
    const double vmax = c.vmax > 0 ? c.vmax : 6.0 * std::sqrt(c.sigma);
    return VelGrid(vmax, c.nv);
}

PlasmaParams make_params(const ScenarioConfig& c, double eps) {
    const PerpGrid grid = make_perp_grid(c);
    const double k = wavenumber(c);
    PlasmaParams p;
    p.q = c.q;
    p.m = c.m;
    p.sigma = c.sigma;
    p.tau = c.tau;
    p.eps0 = c.eps0;
    p.mu0 = c.mu0;
    p.eps = eps;
    const double b = c.bext == "cosine" ? c.bext_amplitude : 0.0;
    const double d = c.background == "cosine" ? c.background_amplitude : 0.0;
    p.b_ext = ScalarField::from_function(grid, [&](double x1, double) {
        return c.b0 * (1.0 + b * std::cos(k * x1));
    });
    p.d_background = ScalarField::from_function(grid, [&](double x1, double) {
        return 1.0 + d * std::cos(k * x1);
    });
    p.validate();
    return p;
}

ScalarField initial_density(const ScenarioConfig& c, const PlasmaParams& params) {
    if (c.family != "well_prepared") return params.d_background;
    const double k = wavenumber(c) * c.mode;
    const PerpGrid& grid = params.grid();
    ScalarField n = params.d_background;
    for (int i = 0; i < grid.n1(); ++i)
        for (int j = 0; j < grid.n2(); ++j)
            n.at(i, j) *= 1.0 + c.amplitude * std::cos(k * grid.x1(i)) * std::cos(k * grid.x2(j));
    // The perturbation sums to zero only up to round-off; pin the total charge to D.
    n *= params.d_background.sum() / n.sum();
    return n;
}

DistributionField initial_distribution(const ScenarioConfig& c, const ScalarField& n0,
                                       const PlasmaParams& params) {
    const VelGrid vg = make_vel_grid(c);
    DistributionField f(params.grid(), vg);
    std::vector<double> shape;
    if (c.family == "drifting" && c.drift != 0.0) {
        shape.resize(vg.size());
        double s = 0.0;
        for (int a = 0; a < vg.nv(); ++a)
            for (int b = 0; b < vg.nv(); ++b)
                for (int cc = 0; cc < vg.nv(); ++cc) {
                    const Vec3 v{vg.node(a) - c.drift, vg.node(b), vg.node(cc)};
                    s += shape[vg.index(a, b, cc)] = maxwellian(v, params.sigma);
                }
        for (double& x : shape) x /= s * vg.cell_volume();
    } else {
        shape = grid_maxwellian(vg, params.sigma);
    }
    for (std::size_t ix = 0; ix < params.grid().size(); ++ix) {
        double* fx = f.node(ix);
        for (std::size_t k = 0; k < shape.size(); ++k) fx[k] = n0[ix] * shape[k];
    }
    return f;
}

EMState initial_fields(const ScalarField& n0, const PlasmaParams& params, const ScalarField* b1) {
    EMState em(params.grid());
    em.E = solve_poisson(charge_density(n0, params), params).E;
    if (b1) em.B[2] = params.eps * *b1;
    return em;
}

KineticOptions kinetic_options(const ScenarioConfig& c) {
    KineticOptions o;
    o.interp_order = c.interp_order;
    o.monotone = c.monotone;
    o.moment_fix = c.moment_fix;
    o.collision = c.collision == "chang_cooper" ? CollisionScheme::ChangCooper
                                                : CollisionScheme::MomentConsistent;
    o.picard_max_iter = c.picard_max_iter;
    o.picard_tol = c.picard_tol;
    o.validate();
    return o;
}

LimitOptions limit_options(const ScenarioConfig& c) {
    LimitOptions o;
    if (c.limiter == "koren") o.limiter = Limiter::Koren;
    else if (c.limiter == "van_leer") o.limiter = Limiter::VanLeer;
    else if (c.limiter == "minmod") o.limiter = Limiter::Minmod;
    else o.limiter = Limiter::Positivity;
    // b1 is rebuilt from the stored snapshots, centred in time, after the run.
    o.refresh_b1 = false;
    return o;
}

double sample_interval(const ScenarioConfig& c) { return c.T / c.samples; }

StepPlan kinetic_step_plan(const ScenarioConfig& c, const PlasmaParams& params) {
    double target = c.dt;
    if (target <= 0.0) {
        target = c.larmor_angle_max * params.eps * params.eps / params.omega_c_max();
        if (c.T > 0) target = std::min(target, 0.01 * c.T);
    }
    return align(sample_interval(c), static_cast<std::size_t>(c.samples), target);
}

StepPlan limit_step_plan(const ScenarioConfig& c, const LimitState& s0, const PlasmaParams& params) {
    double target = c.dt;
    if (target <= 0.0) {
        // limit_cfl_number is linear in dt; keep a factor two below the hard cap so the
        // drift field can grow along the run.
        const double per_unit = limit_cfl_number(s0, params, 1.0);
        target = per_unit > 0 ? 0.5 * limit_options(c).cfl_max / per_unit : 1.0;
        if (c.T > 0) target = std::min(target, 0.01 * c.T);
    }
    return align(sample_interval(c), static_cast<std::size_t>(c.samples), target);
}

}  // namespace vmfp
