#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/core/moments.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"
#include "vmfp/kinetic/kinetic.hpp"
#include "vmfp/kinetic/stepper.hpp"

using namespace vmfp;
using testing::kTwoPi;
using testing::max_abs;

namespace {

double max_abs_diff(const DistributionField& a, const DistributionField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double max_value(const DistributionField& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

/// g(x) times a velocity profile p(v) built from a callback.
template <class G, class P>
DistributionField product(const PerpGrid& xg, const VelGrid& vg, G&& gx, P&& pv) {
    DistributionField f(xg, vg);
    for (int i = 0; i < xg.n1(); ++i)
        for (int j = 0; j < xg.n2(); ++j) {
            double* fx = f.node(xg.index(i, j));
            const double s = gx(xg.x1(i), xg.x2(j));
            for (int a = 0; a < vg.nv(); ++a)
                for (int b = 0; b < vg.nv(); ++b)
                    for (int c = 0; c < vg.nv(); ++c)
                        fx[vg.index(a, b, c)] = s * pv(vg.node(a), vg.node(b), vg.node(c));
        }
    return f;
}

double gauss3(double v1, double v2, double v3, double s12, double s3) {
    return std::exp(-(v1 * v1 + v2 * v2) / (2 * s12) - v3 * v3 / (2 * s3));
}

}  // namespace

TEST_CASE("free transport: x-uniform data is unchanged and mass is exact") {
    const PerpGrid xg(kTwoPi, 8, 8);
    const VelGrid vg(6.0, 8);
    const DistributionField f = testing::local_maxwellian(ScalarField(xg, 1.3), vg);
    const DistributionField out = step_free_transport(f, 0.37, 0.5);
    CHECK(max_abs_diff(out, f) < 1e-15);

    std::mt19937_64 rng(1);
    const DistributionField h = testing::local_maxwellian(testing::random_smooth(xg, rng, 1.0, 0.3), vg);
    const DistributionField hs = step_free_transport(h, 0.11, 0.3);
    CHECK(std::abs(hs.mass() - h.mass()) / h.mass() < 1e-12);
}

TEST_CASE("free transport: single mode advected along characteristics") {
    const PerpGrid xg(kTwoPi, 64, 64);
    const VelGrid vg(4.0, 8);
    const double eps = 0.5, t = 0.3, k = 1.0;
    auto g = [&](double x1, double x2) { return 1.0 + 0.5 * std::cos(k * x1) + 0.25 * std::sin(k * x2); };
    const DistributionField f = product(xg, vg, g, [](double v1, double v2, double v3) { return gauss3(v1, v2, v3, 1, 1); });
    DistributionField out = f;
    for (int s = 0; s < 3; ++s) apply_free_transport(out, t / 3, eps, KineticOptions{});
    double err = 0.0;
    for (int i = 0; i < xg.n1(); ++i)
        for (int j = 0; j < xg.n2(); ++j)
            for (int a = 0; a < vg.nv(); ++a)
                for (int b = 0; b < vg.nv(); ++b)
                    for (int c = 0; c < vg.nv(); ++c) {
                        const double v1 = vg.node(a), v2 = vg.node(b), v3 = vg.node(c);
                        const double exact = g(xg.x1(i) - v1 * t / eps, xg.x2(j) - v2 * t / eps) * gauss3(v1, v2, v3, 1, 1);
                        err = std::max(err, std::abs(out[xg.index(i, j) * vg.size() + vg.index(a, b, c)] - exact));
                    }
    CHECK(err < 1e-4);
}

TEST_CASE("acceleration: no field, no change") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 8);
    std::mt19937_64 rng(2);
    const DistributionField f = testing::shifted_maxwellian(testing::random_smooth(xg, rng, 1.0, 0.2), vg, {0.3, -0.2, 0.1});
    PlasmaParams p = PlasmaParams::uniform(xg);
    CHECK(max_abs_diff(step_acceleration(f, EMState(xg), 0.1, p), f) == 0.0);
}

TEST_CASE("acceleration: uniform E shifts the mean velocity by q E dt / (m eps)") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(7.0, 24);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.q = 1.5;
    p.m = 0.8;
    p.eps = 0.5;
    const DistributionField f = testing::local_maxwellian(ScalarField(xg, 1.0), vg);
    EMState em(xg);
    const double E1 = 0.2, dt = 0.01;
    em.E[0] = ScalarField(xg, E1);
    const DistributionField out = step_acceleration(f, em, dt, p);
    const ScalarField n = density(out);
    const VectorField j = current(out);
    const double oracle = p.q / p.m * E1 * dt / p.eps;
    for (std::size_t q = 0; q < xg.size(); ++q) {
        CHECK(std::abs(j[0][q] / n[q] - oracle) < 1e-6);
        CHECK(std::abs(j[1][q] / n[q]) < 1e-12);
    }
    CHECK(std::abs(out.mass() - f.mass()) / f.mass() < 1e-12);
}

namespace {

// Data whose ratio to the grid Maxwellian is a cubic polynomial in v is reproduced exactly by
// the interpolant, so the invariances of the exact flows show up at round-off level. The box
// is wide enough (vmax = 8) that the clamped edge stencils see only negligible values.
DistributionField cubic_ratio_data(const PerpGrid& xg, const VelGrid& vg, double (*g)(double, double, double)) {
    return product(xg, vg, [](double, double) { return 1.0; },
                   [g](double v1, double v2, double v3) { return g(v1, v2, v3) * gauss3(v1, v2, v3, 1.0, 1.0); });
}

double cubic_ratio(double v1, double v2, double v3) { return 1.0 + 0.2 * v1 - 0.1 * v2 * v3 + 0.05 * v1 * v1 * v2; }
double radial_ratio(double v1, double v2, double) { return 1.0 + 0.3 * (v1 * v1 + v2 * v2); }

/// Largest relative deviation of a Larmor step on a non-polynomial radial profile.
double radial_larmor_error(int nv, int order) {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, nv);
    PlasmaParams p = PlasmaParams::uniform(xg, 1.7);
    p.eps = 0.3;
    KineticOptions opt;
    opt.interp_order = order;
    const DistributionField r = product(xg, vg, [](double, double) { return 1.0; },
                                        [](double v1, double v2, double v3) { return gauss3(v1, v2, v3, 0.8, 1.0); });
    return max_abs_diff(step_larmor(r, 0.05, p, opt), r) / max_value(r);
}

}  // namespace

TEST_CASE("acceleration: magnetic force does no work") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(8.0, 16);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.5;
    const DistributionField f = cubic_ratio_data(xg, vg, cubic_ratio);
    EMState em(xg);
    em.B[0] = ScalarField(xg, 0.3);
    em.B[1] = ScalarField(xg, -0.2);
    em.B[2] = ScalarField(xg, 0.5);
    const DistributionField out = step_acceleration(f, em, 0.01, p);
    CHECK(std::abs(kinetic_energy(out) - kinetic_energy(f)) / kinetic_energy(f) < 1e-8);
}

TEST_CASE("acceleration: moment correction makes magnetic work vanish on general data") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 16);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.5;
    EMState em(xg);
    em.B[0] = ScalarField(xg, 0.3);
    em.B[1] = ScalarField(xg, -0.2);
    em.B[2] = ScalarField(xg, 0.5);
    const DistributionField f = testing::shifted_maxwellian(ScalarField(xg, 1.0), vg, {0.4, -0.3, 0.2});
    const double ke = kinetic_energy(f);
    CHECK(std::abs(kinetic_energy(step_acceleration(f, em, 0.01, p)) - ke) / ke < 1e-8);
    CHECK(std::abs(kinetic_energy(step_larmor(f, 0.01, p)) - ke) / ke < 1e-8);

    // without the correction the work is pure interpolation error and shrinks with h
    auto raw_work = [&](int nv) {
        const VelGrid g(6.0, nv);
        KineticOptions opt;
        opt.moment_fix = false;
        const DistributionField s = testing::shifted_maxwellian(ScalarField(xg, 1.0), g, {0.4, -0.3, 0.2});
        return std::abs(kinetic_energy(step_acceleration(s, em, 0.01, p, opt)) - kinetic_energy(s)) /
               kinetic_energy(s);
    };
    const double coarse = raw_work(16), fine = raw_work(32);
    MESSAGE("uncorrected relative KE change nv=16: " << coarse << ", nv=32: " << fine);
    CHECK(coarse / fine > 6.0);
}

TEST_CASE("acceleration: momentum follows the exact affine flow") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 16);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.5;
    EMState em(xg);
    em.E[0] = ScalarField(xg, 0.2);
    em.E[2] = ScalarField(xg, -0.1);
    em.B[2] = ScalarField(xg, 0.7);
    const DistributionField f = testing::shifted_maxwellian(ScalarField(xg, 1.0), vg, {0.3, 0.1, 0.0});
    const double dt = 0.05, kappa = p.q / (p.m * p.eps);
    const VectorField j0 = current(f);
    const ScalarField n0 = density(f);
    const DistributionField out = step_acceleration(f, em, dt, p);
    const VectorField j1 = current(out);
    // du/ds = kappa (E + u x B) with B = B3 e3: rotation about the E x B drift, plus E3 push
    const double u1 = j0[0][0] / n0[0], u2 = j0[1][0] / n0[0], u3 = j0[2][0] / n0[0];
    const double w = kappa * 0.7, d1 = 0.0, d2 = -0.2 / 0.7;
    const double c = std::cos(w * dt), s = std::sin(w * dt);
    const double e1 = c * (u1 - d1) + s * (u2 - d2) + d1;
    const double e2 = -s * (u1 - d1) + c * (u2 - d2) + d2;
    const double e3 = u3 + kappa * (-0.1) * dt;
    const ScalarField n1 = density(out);
    CHECK(j1[0][0] / n1[0] == doctest::Approx(e1).epsilon(1e-12));
    CHECK(j1[1][0] / n1[0] == doctest::Approx(e2).epsilon(1e-12));
    CHECK(j1[2][0] / n1[0] == doctest::Approx(e3).epsilon(1e-12));
}

TEST_CASE("larmor: Maxwellian and other radially symmetric data") {
    const PerpGrid xg(kTwoPi, 4, 4);
    PlasmaParams p = PlasmaParams::uniform(xg, 1.7);
    p.eps = 0.3;
    const VelGrid vg(6.0, 16);
    const DistributionField m = testing::local_maxwellian(ScalarField(xg, 1.0), vg);
    CHECK(max_abs_diff(step_larmor(m, 0.05, p), m) < 1e-15);

    const VelGrid wide(8.0, 16);
    const DistributionField r = cubic_ratio_data(xg, wide, radial_ratio);
    const DistributionField out = step_larmor(r, 0.05, p);
    CHECK(max_abs_diff(out, r) / max_value(r) < 1e-8);
    CHECK(std::abs(out.mass() - r.mass()) / r.mass() < 1e-13);
}

TEST_CASE("larmor: radial invariance error converges at the interpolation order") {
    const double c16 = radial_larmor_error(16, 3), c32 = radial_larmor_error(32, 3);
    const double q16 = radial_larmor_error(16, 5), q32 = radial_larmor_error(32, 5);
    MESSAGE("cubic " << c16 << " -> " << c32 << ", quintic " << q16 << " -> " << q32);
    CHECK(c16 / c32 > 6.0);
    CHECK(q16 / q32 > 20.0);
}

TEST_CASE("larmor: full revolution and angle additivity") {
    const PerpGrid xg(kTwoPi, 4, 4);
    PlasmaParams p = PlasmaParams::uniform(xg, 1.0);
    p.eps = 0.5;
    {
        const VelGrid vg(6.0, 24);
        const DistributionField f = testing::shifted_maxwellian(ScalarField(xg, 1.0), vg, {0.7, 0.2, 0.0});
        const double full = kTwoPi * p.eps * p.eps / p.omega_c_max();
        CHECK(max_abs_diff(step_larmor(f, full, p), f) / max_value(f) < 1e-4);
    }
    const VelGrid vg(8.0, 16);
    const DistributionField f = cubic_ratio_data(xg, vg, cubic_ratio);
    const double dt = 0.1;
    const DistributionField one = step_larmor(f, dt, p);
    const DistributionField two = step_larmor(step_larmor(f, dt / 2, p), dt / 2, p);
    CHECK(max_abs_diff(one, two) / max_value(f) < 1e-8);
}

TEST_CASE("larmor: rotation sense follows perp v = (v2, -v1, 0)") {
    // dv/dt = omega (v2, -v1)/eps^2 rotates clockwise: a drift along +v1 turns toward -v2.
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 24);
    PlasmaParams p = PlasmaParams::uniform(xg, 1.0);
    p.eps = 1.0;
    const double u = 0.5, angle = 0.3;
    const DistributionField f = testing::shifted_maxwellian(ScalarField(xg, 1.0), vg, {u, 0.0, 0.0});
    const DistributionField out = step_larmor(f, angle, p);
    const VectorField j = current(out);
    const ScalarField n = density(out);
    CHECK(j[0][0] / n[0] == doctest::Approx(u * std::cos(angle)).epsilon(1e-4));
    CHECK(j[1][0] / n[0] == doctest::Approx(-u * std::sin(angle)).epsilon(1e-4));
}

TEST_CASE("collision: local Maxwellian is a fixed point") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 16);
    std::mt19937_64 rng(3);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.2;
    const DistributionField f = testing::local_maxwellian(testing::random_smooth(xg, rng, 1.0, 0.3), vg);
    for (auto scheme : {CollisionScheme::MomentConsistent, CollisionScheme::ChangCooper}) {
        KineticOptions o;
        o.collision = scheme;
        CHECK(max_abs_diff(step_collision(f, 0.3, p, o), f) / max_value(f) < 1e-10);
    }
}

TEST_CASE("collision: mean velocity decays at rate 1/(eps tau)") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 16);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.5;
    p.tau = 0.8;
    const DistributionField f = testing::shifted_maxwellian(ScalarField(xg, 1.0), vg, {0.3, -0.2, 0.1});
    const double dt = 1e-3;
    const DistributionField out = step_collision(f, dt, p);
    const VectorField j0 = current(f), j1 = current(out);
    const double decay = std::exp(-dt / (p.eps * p.tau));
    for (int c = 0; c < 3; ++c) CHECK(j1[c][0] / j0[c][0] == doctest::Approx(decay).epsilon(1e-4));
    CHECK(std::abs(out.mass() - f.mass()) / f.mass() < 1e-12);
}

TEST_CASE("collision: positivity and mass on rough data, both regimes") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 8);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DistributionField f(xg, vg);
    for (double& x : f.values()) x = u(rng) < 0.3 ? 0.0 : u(rng);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.1;
    for (double dt : {1e-3, 0.5, 20.0}) {
        const DistributionField out = step_collision(f, dt, p);
        CHECK(out.min() >= 0.0);
        CHECK(std::abs(out.mass() - f.mass()) / f.mass() < 1e-12);
    }
}

TEST_CASE("collision face weights are positive") {
    const VelGrid vg(6.0, 16);
    for (auto s : {CollisionScheme::MomentConsistent, CollisionScheme::ChangCooper}) {
        const auto w = collision_face_weights(vg, 1.0, s);
        CHECK(w.size() == 15u);
        for (double x : w) CHECK(x > 0.0);
    }
}

TEST_CASE("mollify") {
    const PerpGrid g(kTwoPi, 32, 32);
    std::mt19937_64 rng(5);
    const double delta = 0.6;
    const ScalarField c(g, 2.5);
    CHECK(max_abs(mollify(c, delta) - c) < 1e-14);
    CHECK(max_abs(mollify(c, 0.0) - c) == 0.0);

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        ScalarField f(g), h(g);
        for (double& x : f.values()) x = u(rng);
        for (double& x : h.values()) x = u(rng);
        const ScalarField kf = mollify(f, delta), kh = mollify(h, delta);
        double a = 0.0, b = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            a += kf[q] * h[q];
            b += f[q] * kh[q];
        }
        CHECK(std::abs(a - b) < 1e-12);
    }

    ScalarField point(g);
    point.at(0, 0) = 1.0;
    const ScalarField kernel = mollifier_kernel(g, delta);
    CHECK(max_abs(mollify(point, delta) - kernel) < 1e-15);
    CHECK(kernel.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kernel.min() >= 0.0);
    CHECK_THROWS_AS(mollify(c, 0.51 * g.length()), ParameterError);
    CHECK_THROWS_AS(mollify(c, -0.1), ParameterError);
}

TEST_CASE("strang_step: zero data stays zero") {
    const PerpGrid xg(kTwoPi, 4, 4);
    const VelGrid vg(6.0, 8);
    KineticStepper st(PlasmaParams::uniform(xg, 1.0, 0.0), DistributionField(xg, vg), EMState(xg));
    st.strang_step(0.01);
    CHECK(max_value(st.f()) == 0.0);
    CHECK(max_abs(st.em().E) == 0.0);
    CHECK(st.time() == doctest::Approx(0.01));
}

TEST_CASE("strang_step: global equilibrium is stationary") {
    const PerpGrid xg(kTwoPi, 8, 8);
    const VelGrid vg(6.0, 12);
    PlasmaParams p = PlasmaParams::uniform(xg, 1.3, 1.0);
    p.eps = 0.4;
    const DistributionField f = testing::local_maxwellian(ScalarField(xg, 1.0), vg);
    KineticStepper st(p, f, EMState(xg));
    for (int n = 0; n < 20; ++n) st.strang_step(0.05);
    CHECK(l1_distance(st.f(), f) / st.time() < 1e-8);
    CHECK(max_abs(st.em().E) < 1e-12);
}

// Quintic interpolation keeps the accumulated semi-Lagrangian error, which carries an
// O(dt h^p) part on a fixed mesh, below the splitting error so the time order is visible.
TEST_CASE("strang_step: second order in time") {
    const PerpGrid xg(kTwoPi, 8, 8);
    const VelGrid vg(6.0, 12);
    PlasmaParams p = PlasmaParams::uniform(xg, 1.0, 1.0);
    p.eps = 0.8;
    std::mt19937_64 rng(6);
    const ScalarField n0 = testing::random_smooth(xg, rng, 1.0, 0.2, 1);
    p.d_background = n0;
    DistributionField f0 = testing::shifted_maxwellian(n0, vg, {0.1, 0.05, 0.0});
    p.d_background *= density(f0).sum() / n0.sum();
    EMState em0(xg);
    em0.E = solve_poisson(charge_density(density(f0), p), p).E;
    KineticOptions opt;
    opt.interp_order = 5;
    const double T = 0.2;
    auto run = [&](int steps) {
        KineticStepper st(p, f0, em0, opt);
        for (int n = 0; n < steps; ++n) st.strang_step(T / steps);
        return st.f();
    };
    const DistributionField a = run(2), b = run(4), c = run(8), d = run(16);
    const double e1 = l1_distance(a, b), e2 = l1_distance(b, c), e3 = l1_distance(c, d);
    MESSAGE("self-convergence ratios " << e1 / e2 << ", " << e2 / e3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("picard_cycle: trivial fixed point in one iteration") {
    const PerpGrid xg(kTwoPi, 8, 8);
    const VelGrid vg(6.0, 8);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.5;
    const DistributionField f = testing::local_maxwellian(ScalarField(xg, 1.0), vg);
    KineticStepper st(p, f, EMState(xg));
    st.picard_cycle(0.01, 0.5);
    CHECK(st.last_report().residuals.size() == 1u);
    CHECK(l1_distance(st.f(), f) < 1e-14 * f.mass());
}

namespace {

struct SmoothCase {
    PlasmaParams params;
    DistributionField f;
    EMState em;
};

SmoothCase smooth_case(int nx, int nv, std::uint64_t seed) {
    const PerpGrid xg(kTwoPi, nx, nx);
    const VelGrid vg(6.0, nv);
    std::mt19937_64 rng(seed);
    SmoothCase s{PlasmaParams::uniform(xg), DistributionField(), EMState(xg)};
    s.params.b_ext = testing::random_smooth(xg, rng, 1.0, 0.2, 1);
    s.params.eps = 0.5;
    const ScalarField n0 = testing::random_smooth(xg, rng, 1.0, 0.2, 1);
    s.f = testing::shifted_maxwellian(n0, vg, {0.1, -0.1, 0.05});
    s.params.d_background = testing::random_smooth(xg, rng, 1.0, 0.1, 1);
    s.params.d_background *= density(s.f).sum() / s.params.d_background.sum();
    s.em.E = solve_poisson(charge_density(density(s.f), s.params), s.params).E;
    s.em.B[2] = testing::random_smooth(xg, rng, 0.0, 0.05, 1);
    return s;
}

}  // namespace

TEST_CASE("picard_cycle: contraction on a smooth state") {
    SmoothCase s = smooth_case(16, 8, 7);
    KineticOptions o;
    o.picard_tol = 1e-13;
    KineticStepper st(s.params, s.f, s.em, o);
    st.picard_cycle(2e-3, 1.5 * s.f.xgrid().h1());
    const auto& r = st.last_report().residuals;
    REQUIRE(r.size() >= 3);
    for (std::size_t k = 1; k + 1 < r.size(); ++k) CHECK(r[k + 1] / r[k] < 0.5);
}

TEST_CASE("picard_cycle: iteration cap raises with the residual history") {
    SmoothCase s = smooth_case(8, 8, 8);
    KineticOptions o;
    o.picard_max_iter = 2;
    o.picard_tol = 1e-300;
    KineticStepper st(s.params, s.f, s.em, o);
    try {
        st.picard_cycle(1e-2, 1.5);
        FAIL("expected IterationError");
    } catch (const IterationError& e) {
        CHECK(e.residuals().size() == 2u);
    }
}

TEST_CASE("picard_cycle agrees with strang_step to second order") {
    SmoothCase s = smooth_case(16, 8, 9);
    // below one cell the kernel reduces to the identity: the delta -> 0 limit on this mesh
    const double delta = 0.5 * s.f.xgrid().h1();
    auto gap = [&](double dt) {
        KineticStepper a(s.params, s.f, s.em), b(s.params, s.f, s.em);
        a.strang_step(dt);
        b.picard_cycle(dt, delta);
        return l1_distance(a.f(), b.f());
    };
    const double g1 = gap(4e-3), g2 = gap(2e-3);
    MESSAGE("picard vs strang: " << g1 << " -> " << g2);
    CHECK(g1 / g2 > 3.0);
}
