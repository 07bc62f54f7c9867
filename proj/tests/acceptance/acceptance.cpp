// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any fails.
// Thresholds are fixed here and never read from the command line.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vmfp/core/moments.hpp"
#include "vmfp/core/velocity.hpp"
#include "vmfp/diagnostics/diagnostics.hpp"
#include "vmfp/harness/config.hpp"
#include "vmfp/harness/runs.hpp"
#include "vmfp/harness/scenario.hpp"
#include "vmfp/harness/sweep.hpp"
#include "vmfp/kinetic/kinetic.hpp"
#include "vmfp/kinetic/stepper.hpp"
#include "vmfp/limit/limit.hpp"

using namespace vmfp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Context {
    fs::path configs;
    fs::path out;
    // Energy-bound margins of every kinetic run, collected for the kinetic-energy bound line.
    std::vector<std::pair<std::string, double>> margins;
    std::vector<std::pair<std::string, bool>> bound_ok;
};

ScenarioConfig config(const Context& ctx, const char* name) { return load_config(ctx.configs / name); }

std::vector<Outcome> conservation(Context& ctx) {
    const ScenarioConfig c = config(ctx, "conservation.toml");
    KineticRunOptions o;
    o.out_dir = ctx.out / "conservation";
    const KineticRunResult r = run_kinetic(c, c.eps, o);
    ctx.margins.emplace_back("conservation", r.energy_bound.margin);
    ctx.bound_ok.emplace_back("conservation", r.energy_bound.ok);
    const KineticRunStats& s = r.stats;
    const bool pass = s.max_mass_drift < 1e-9 && s.min_value >= 0.0 && s.max_div_b <= 1e-10 &&
                      s.max_gauss_residual < 1e-8;
    const double slack = 1e-4;
    return {
        {"conservation suite", pass,
         fmt("mass drift %.3e (<1e-9), min f %.3e (>=0), div B %.3e (<=1e-10), Gauss %.3e (<1e-8), %zu steps",
             s.max_mass_drift, s.min_value, s.max_div_b, s.max_gauss_residual, r.plan.total_steps())},
        {"free-energy estimate", s.max_free_energy_rate <= slack,
         fmt("max d/dt [free energy + dissipation/(eps tau)] = %.3e (<= %.0e per unit time)",
             s.max_free_energy_rate, slack)},
    };
}

Outcome equilibrium(Context& ctx) {
    const ScenarioConfig c = config(ctx, "equilibrium.toml");
    const PlasmaParams p = make_params(c, c.eps);
    const DistributionField f0 = initial_distribution(c, initial_density(c, p), p);
    double worst = 0.0;
    KineticRunOptions o;
    o.out_dir = ctx.out / "equilibrium";
    o.on_step = [&](const KineticStepper& st) { worst = std::max(worst, l1_distance(st.f(), f0)); };
    const KineticRunResult r = run_kinetic(c, c.eps, o);
    ctx.margins.emplace_back("equilibrium", r.energy_bound.margin);
    ctx.bound_ok.emplace_back("equilibrium", r.energy_bound.ok);
    return {"equilibrium fixed point", worst < 1e-6,
            fmt("max L1 distance to f0 over T = %g: %.3e (<1e-6)", c.T, worst)};
}

Outcome collision_oracle(Context&) {
    const PerpGrid xg(2.0 * M_PI, 4, 4);
    const VelGrid vg(6.0, 16);
    PlasmaParams p = PlasmaParams::uniform(xg);
    p.eps = 0.5;
    p.tau = 0.8;
    const double rate = 1.0 / (p.eps * p.tau);
    const int steps = 400;
    const double dt = 1.0 / rate / steps;
    DistributionField f(xg, vg);
    const Vec3 u{0.3, -0.2, 0.1};
    for (std::size_t ix = 0; ix < xg.size(); ++ix)
        for (int a = 0; a < vg.nv(); ++a)
            for (int b = 0; b < vg.nv(); ++b)
                for (int k = 0; k < vg.nv(); ++k)
                    f.node(ix)[vg.index(a, b, k)] =
                        maxwellian({vg.node(a) - u[0], vg.node(b) - u[1], vg.node(k) - u[2]}, 1.0);
    const VectorField j0 = current(f);
    double worst = 0.0;
    for (int s = 1; s <= steps; ++s) {
        f = step_collision(f, dt, p);
        const VectorField j = current(f);
        const double t = s * dt;
        for (int c = 0; c < 3; ++c) {
            const double measured = -std::log(j[c][0] / j0[c][0]) / t;
            worst = std::max(worst, std::abs(measured - rate) / rate);
        }
    }
    return {"collision oracle", worst < 1e-3,
            fmt("mean-velocity decay rate vs 1/(eps tau) = %g over one e-folding: max rel. error %.3e (<1e-3)",
                rate, worst)};
}

Outcome limit_model(Context& ctx) {
    const ScenarioConfig c = config(ctx, "limit.toml");
    const LimitRunResult r = run_limit(c, ctx.out / "limit");
    const double m0 = r.records.front().mass, F0 = r.records.front().free_energy;
    double mass = 0.0, drift = 0.0;
    for (const auto& rec : r.records) {
        mass = std::max(mass, std::abs(rec.mass - m0) / m0);
        drift = std::max(drift, std::abs(rec.free_energy - F0));
    }
    return {"limit model", mass < 1e-12 && drift < 1e-4,
            fmt("mass drift %.3e (<1e-12), free-energy drift %.3e (<1e-4) over T = %g at dt = %g", mass, drift,
                c.T, r.plan.dt)};
}

ScalarField smooth_field(const PerpGrid& g, std::mt19937_64& rng, double base, double amp) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField s(g, base);
    for (int a = 0; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            if (a == 0 && b <= 0) continue;
            const double c = amp * u(rng) / (1 + a * a + b * b), ph = M_PI * u(rng);
            for (int i = 0; i < g.n1(); ++i)
                for (int j = 0; j < g.n2(); ++j) s.at(i, j) += c * std::cos(a * g.x1(i) + b * g.x2(j) + ph);
        }
    return s;
}

Outcome flux_equivalence(Context&) {
    double worst = 1e300;
    std::string orders;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::vector<double> r;
        for (int n : {32, 64, 128}) {
            const PerpGrid g(2.0 * M_PI, n, n);
            std::mt19937_64 rng(seed);
            PlasmaParams p = PlasmaParams::uniform(g);
            p.b_ext = smooth_field(g, rng, 1.0, 0.3);
            const ScalarField dens = smooth_field(g, rng, 1.0, 0.3);
            VectorField E(g);
            E[0] = smooth_field(g, rng, 0.0, 0.5);
            E[1] = smooth_field(g, rng, 0.0, 0.5);
            r.push_back(flux_equivalence_residual(dens, E, p));
        }
        for (int k = 0; k < 2; ++k) {
            const double order = std::log2(r[k] / r[k + 1]);
            worst = std::min(worst, order);
            orders += fmt(" %.2f", order);
        }
    }
    return {"flux equivalence", worst >= 2.0,
            fmt("observed orders 32->64->128 over 5 random cases:%s (min %.2f >= 2)", orders.c_str(), worst)};
}

std::vector<Outcome> sweep_and_kullback(Context& ctx) {
    const ScenarioConfig c = config(ctx, "sweep.toml");
    const SweepManifest m = run_epsilon_sweep(c, ctx.out / "sweep");
    std::vector<Outcome> out;
    bool decreasing = m.complete;
    std::string sups;
    std::size_t ck_bad = 0;
    double ck_ratio = 0.0;
    for (std::size_t k = 0; k < m.runs.size(); ++k) {
        const SweepEntry& e = m.runs[k];
        sups += fmt(" eps=%g:%.4e", e.eps, e.sup_modulated_energy);
        if (k > 0) decreasing = decreasing && e.sup_modulated_energy < m.runs[k - 1].sup_modulated_energy;
        ctx.margins.emplace_back(fmt("sweep eps=%g", e.eps), e.kinetic_energy_margin);
        ck_bad += e.ck_violations;
        ck_ratio = std::max(ck_ratio, e.ck_max_ratio);
    }
    const double slope = m.slope.value_or(-1.0);
    out.push_back({"modulated-energy sweep", decreasing && slope >= 0.4,
                   fmt("sup ME%s; strictly decreasing: %s; log-log slope %.3f (>=0.4)", sups.c_str(),
                       decreasing ? "yes" : "no", slope)});

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int random_bad = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 500);
        std::vector<double> a(n), b(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = u(rng) < 0.1 ? 0.0 : u(rng) * 3.0;
            b[k] = u(rng) < 0.1 ? 0.0 : u(rng);
        }
        if (!csiszar_kullback_check(a, b, 0.01 + u(rng)).holds()) ++random_bad;
    }
    out.push_back({"Csiszar-Kullback", random_bad == 0 && ck_bad == 0 && m.complete,
                   fmt("violations: %d of 100 random pairs, %zu on sweep snapshots (max lhs/rhs %.3f)", random_bad,
                       ck_bad, ck_ratio)});
    return out;
}

Outcome kinetic_energy_bound(const Context& ctx) {
    bool pass = !ctx.margins.empty();
    std::string parts;
    for (const auto& [name, margin] : ctx.margins) {
        pass = pass && margin >= 0.0;
        parts += fmt(" %s:%.3e", name.c_str(), margin);
    }
    for (const auto& [name, ok] : ctx.bound_ok) pass = pass && ok;
    return {"kinetic-energy bound", pass, "margins" + parts + " (>=0)"};
}

std::vector<Outcome> picard(Context& ctx) {
    ScenarioConfig c = config(ctx, "default.toml");
    c.n1 = c.n2 = 16;
    c.nv = 8;
    const PlasmaParams p = make_params(c, c.eps);
    const ScalarField n0 = initial_density(c, p);
    const DistributionField f0 = initial_distribution(c, n0, p);
    const ScalarField b1 = limit_b1_at_start(c);
    const EMState em0 = initial_fields(n0, p, &b1);
    const KineticOptions opt = kinetic_options(c);
    const double h = f0.xgrid().h1();

    std::string gaps;
    bool gap_ok = true;
    for (double dt : {1e-2, 5e-3}) {
        KineticStepper a(p, f0, em0, opt), b(p, f0, em0, opt);
        a.strang_step(dt);
        b.picard_cycle(dt, 0.5 * h);
        const double g = l1_distance(a.f(), b.f());
        gap_ok = gap_ok && g <= 10.0 * dt * dt;
        gaps += fmt(" dt=%g: %.3e (<=%.1e)", dt, g, 10.0 * dt * dt);
    }

    // Energy balance in mollified mode: KE + W changes only through collisions.
    const double dt = 5e-3, delta = 1.5 * h;
    KineticStepper st(p, f0, em0, opt);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
        st.picard_cycle(dt, delta);
        const StepReport& r = st.last_report();
        const double res = (r.kinetic_after + r.field_after) - (r.kinetic_before + r.field_before) -
                           r.collision_energy;
        worst = std::max(worst, std::abs(res));
    }
    return {
        {"Picard vs Strang", gap_ok, "L1 gap after one step:" + gaps},
        {"Picard energy identity", worst <= 1e-6,
         fmt("max |d(KE + W) - collision work| per step over 10 steps (delta = 1.5 h): %.3e (<=1e-6)", worst)},
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    std::string configs = VMFP_CONFIG_DIR, out = "acceptance-out";
    std::vector<std::string> only;
    app.add_option("--configs", configs, "directory holding the scenario files")->check(CLI::ExistingDirectory);
    app.add_option("--out", out, "directory for run outputs");
    app.add_option("--only", only, "run only these groups")
        ->check(CLI::IsMember({"conservation", "equilibrium", "collision", "limit", "flux", "sweep", "picard"}));
    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::warn);

    Context ctx{configs, out, {}, {}};
    fs::create_directories(ctx.out);
    const auto wanted = [&](const std::string& g) {
        return only.empty() || std::find(only.begin(), only.end(), g) != only.end();
    };

    std::vector<Outcome> results;
    const auto group = [&](const std::string& g, const std::function<std::vector<Outcome>()>& body) {
        if (!wanted(g)) return;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            for (Outcome& o : body()) {
                const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                std::printf("%s  %s: %s [%.0f s]\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.detail.c_str(),
                            secs);
                std::fflush(stdout);
                results.push_back(std::move(o));
            }
        } catch (const std::exception& e) {
            std::printf("FAIL  %s: %s\n", g.c_str(), e.what());
            results.push_back({g, false, e.what()});
        }
    };

    group("conservation", [&] { return conservation(ctx); });
    group("equilibrium", [&] { return std::vector{equilibrium(ctx)}; });
    group("collision", [&] { return std::vector{collision_oracle(ctx)}; });
    group("limit", [&] { return std::vector{limit_model(ctx)}; });
    group("flux", [&] { return std::vector{flux_equivalence(ctx)}; });
    group("sweep", [&] { return sweep_and_kullback(ctx); });
    group("picard", [&] { return picard(ctx); });
    if (wanted("conservation") && wanted("equilibrium") && wanted("sweep")) {
        const Outcome o = kinetic_energy_bound(ctx);
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.detail.c_str());
        results.push_back(o);
    }

    const auto failed = std::count_if(results.begin(), results.end(), [](const Outcome& o) { return !o.pass; });
    std::printf("%zu criteria, %td failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
