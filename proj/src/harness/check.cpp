#include "vmfp/harness/check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vmfp/core/moments.hpp"
#include "vmfp/core/velocity.hpp"
#include "vmfp/diagnostics/diagnostics.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"
#include "vmfp/kinetic/stepper.hpp"
#include "vmfp/limit/limit.hpp"

namespace vmfp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField smooth_positive(const PerpGrid& g, std::mt19937_64& rng, double base, double amp) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = amp * u(rng), b = amp * u(rng), p = kTwoPi * u(rng);
    const double k = kTwoPi / g.length();
    return ScalarField::from_function(g, [&](double x1, double x2) {
        return base * (1.0 + a * std::cos(k * x1 + p) + b * std::sin(k * x2) * std::cos(k * x1));
    });
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<CheckResult> out;
    auto add = [&](std::string name, double value, double threshold) {
        out.push_back({std::move(name), value <= threshold, value, threshold});
    };

    {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const Vec3 v{5 * u(rng), 5 * u(rng), 5 * u(rng)};
            Vec3 b{u(rng), u(rng), u(rng)};
            const double nb = std::sqrt(dot(b, b));
            for (double& x : b) x /= nb;
            const Vec3 w = rotate_velocity(v, 10 * u(rng), b);
            worst = std::max(worst, std::abs(std::sqrt(dot(w, w)) - std::sqrt(dot(v, v))));
        }
        add("rotation preserves |v|", worst, 1e-12);
    }

    const PerpGrid grid(kTwoPi, 8, 8);
    const VelGrid vg(6.0, 8);
    PlasmaParams params = PlasmaParams::uniform(grid, 1.0, 1.0);
    params.b_ext = smooth_positive(grid, rng, 1.0, 0.2);
    params.d_background = smooth_positive(grid, rng, 1.0, 0.1);
    params.eps = 0.5;

    {
        const ScalarField n = params.d_background;
        const auto M = grid_maxwellian(vg, params.sigma);
        DistributionField f(grid, vg);
        for (std::size_t ix = 0; ix < grid.size(); ++ix)
            for (std::size_t k = 0; k < M.size(); ++k) f.node(ix)[k] = n[ix] * M[k] * (1.0 + 0.05 * u(rng));
        // The perturbation breaks exact neutrality; recenter the background on the new mass.
        const ScalarField nf = density(f);
        params.d_background *= nf.sum() / params.d_background.sum();
        EMState em(grid);
        em.E = solve_poisson(charge_density(nf, params), params).E;
        KineticOptions opt;
        opt.monotone = true;
        KineticStepper st(params, f, em, opt);
        const double m0 = st.f().mass();
        for (int k = 0; k < 3; ++k) st.strang_step(0.01);
        add("kinetic step conserves mass (relative)", std::abs(st.f().mass() - m0) / m0, 1e-12);
        add("kinetic step keeps f >= 0 (monotone)", std::max(0.0, -st.f().min()), 0.0);
        add("div B after kinetic steps", div_b_norm(st.em().B), 1e-10);
        add("Gauss residual after projection",
            gauss_residual(st.em().E, charge_density(density(st.f()), params), params), 1e-8);
    }

    {
        PlasmaParams uni = PlasmaParams::uniform(grid, 1.0 + 0.5 * std::abs(u(rng)), 1.0);
        uni.eps = 0.5;
        const auto M = grid_maxwellian(vg, uni.sigma);
        DistributionField f(grid, vg);
        for (std::size_t ix = 0; ix < grid.size(); ++ix)
            std::copy(M.begin(), M.end(), f.node(ix));
        KineticStepper st(uni, f, EMState(grid));
        for (int k = 0; k < 5; ++k) st.strang_step(0.02);
        add("uniform equilibrium is a fixed point (L1)", l1_distance(st.f(), f), 1e-10);
    }

    {
        int failures = 0;
        std::uniform_real_distribution<double> pos(0.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> g(64), g0(64);
            for (std::size_t i = 0; i < g.size(); ++i) {
                g[i] = pos(rng);
                g0[i] = pos(rng) + 1e-3;
            }
            if (!csiszar_kullback_check(g, g0, 0.1).holds()) ++failures;
        }
        add("Csiszar-Kullback on 100 random pairs (failures)", failures, 0.0);
    }

    {
        const ScalarField n0 = smooth_positive(grid, rng, 1.0, 0.1);
        PlasmaParams lp = params;
        lp.d_background = n0;
        ScalarField n = n0;
        for (int i = 0; i < grid.n1(); ++i)
            for (int j = 0; j < grid.n2(); ++j)
                n.at(i, j) *= 1.0 + 0.05 * std::cos(grid.x1(i)) * std::cos(grid.x2(j));
        lp.d_background *= n.sum() / n0.sum();
        LimitState s = limit_initial_state(n, lp);
        const double m0 = s.n.integral();
        LimitOptions lo;
        lo.refresh_b1 = false;
        for (int k = 0; k < 5; ++k) s = limit_step(s, 0.01, lp, lo);
        add("limit step conserves mass (relative)", std::abs(s.n.integral() - m0) / m0, 1e-12);
    }
    return out;
}

}  // namespace vmfp
