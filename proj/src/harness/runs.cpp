#include "vmfp/harness/runs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <memory>
#include <spdlog/spdlog.h>

#include "vmfp/core/errors.hpp"
#include "vmfp/core/moments.hpp"
#include "vmfp/diagnostics/records.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"
#include "vmfp/kinetic/checkpoint.hpp"

namespace vmfp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw StateError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// Snapshots 0..intervals of the limit run with b1 attached. T = 0 has no interval to
// difference over, so one probe step of 1e-3 stands in for it and is discarded.
std::vector<LimitState> limit_snapshots(const ScenarioConfig& c, const PlasmaParams& params,
                                        std::size_t intervals, StepPlan* plan_out,
                                        RecordWriter* writer,
                                        std::vector<DiagnosticsRecord>* records) {
    const LimitOptions opt = limit_options(c);
    std::vector<LimitState> snaps{limit_initial_state(initial_density(c, params), params)};
    const StepPlan plan = limit_step_plan(c, snaps[0], params);
    if (plan_out) *plan_out = plan;
    auto emit = [&](const LimitState& s) {
        if (!records && !writer) return;
        const DiagnosticsRecord r = limit_record(s, params);
        if (records) records->push_back(r);
        if (writer) writer->write(r);
    };
    emit(snaps[0]);
    for (std::size_t k = 0; k < intervals; ++k) {
        LimitState s = snaps.back();
        for (std::size_t j = 0; j < plan.steps_per_sample; ++j) s = limit_step(s, plan.dt, params, opt);
        s.t = static_cast<double>(k + 1) * sample_interval(c);
        emit(s);
        snaps.push_back(std::move(s));
    }
    if (snaps.size() == 1) {
        constexpr double probe = 1e-3;
        snaps.push_back(limit_step(snaps[0], probe, params, opt));
        attach_b1(snaps, probe, params, opt.b1_div_tolerance);
        snaps.pop_back();
    } else {
        attach_b1(snaps, sample_interval(c), params, opt.b1_div_tolerance);
    }
    return snaps;
}

}  // namespace

void attach_b1(std::vector<LimitState>& s, double h, const PlasmaParams& params, double tol) {
    const std::size_t n = s.size();
    if (n < 2) throw StateError("attach_b1: need at least two snapshots");
    if (!(h > 0)) throw ParameterError("attach_b1: interval must be positive");
    for (std::size_t k = 0; k < n; ++k) {
        VectorField dtE;
        if (n == 2) {
            dtE = (1.0 / h) * (s[1].E - s[0].E);
        } else if (k == 0) {
            dtE = (1.0 / (2.0 * h)) * (4.0 * s[1].E - 3.0 * s[0].E - s[2].E);
        } else if (k == n - 1) {
            dtE = (1.0 / (2.0 * h)) * (3.0 * s[k].E - 4.0 * s[k - 1].E + s[k - 2].E);
        } else {
            dtE = (1.0 / (2.0 * h)) * (s[k + 1].E - s[k - 1].E);
        }
        s[k].b1 = reconstruct_b1(s[k].n, s[k].E, dtE, params, tol);
    }
}

LimitRunResult run_limit(const ScenarioConfig& c, const fs::path& out_dir) {
    LimitRunResult res;
    res.trajectory.params = make_params(c, c.eps);
    res.trajectory.interval = sample_interval(c);
    std::unique_ptr<RecordWriter> writer;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_resolved_config(c, out_dir / "resolved-config.toml");
        writer = std::make_unique<RecordWriter>(out_dir / "records.csv");
    }
    try {
        res.trajectory.snapshots =
            limit_snapshots(c, res.trajectory.params, static_cast<std::size_t>(c.T > 0 ? c.samples : 0),
                            &res.plan, writer.get(), &res.records);
    } catch (const std::exception& e) {
        spdlog::error("run_limit: {}", e.what());
        throw;
    }
    if (!out_dir.empty()) {
        save_checkpoint(out_dir, res.trajectory.snapshots.back(), res.trajectory.params);
        write_json(out_dir / "manifest.json",
                   json{{"kind", "limit"},
                        {"complete", true},
                        {"T", c.T},
                        {"samples", c.samples},
                        {"dt", res.plan.dt},
                        {"steps", res.plan.total_steps()},
                        {"records", "records.csv"},
                        {"checkpoint", "checkpoint.json"}});
    }
    return res;
}

ScalarField limit_b1_at_start(const ScenarioConfig& c) {
    const PlasmaParams params = make_params(c, c.eps);
    const std::size_t intervals = c.T > 0 ? std::min<std::size_t>(2, c.samples) : 0;
    return limit_snapshots(c, params, intervals, nullptr, nullptr, nullptr).front().b1;
}

KineticRunResult run_kinetic(const ScenarioConfig& c, double eps, const KineticRunOptions& options) {
    KineticRunResult res;
    res.params = make_params(c, eps);
    const PlasmaParams& params = res.params;
    res.plan = kinetic_step_plan(c, params);
    const LimitTrajectory* ref = options.reference;
    if (ref) {
        const std::size_t expected = (c.T > 0 ? res.plan.samples : 0) + 1;
        if (ref->snapshots.size() != expected || ref->interval != sample_interval(c))
            throw StateError("run_kinetic: reference trajectory does not match the record times");
        require_same_grid(ref->params.grid(), params.grid(), "run_kinetic");
    }

    const ScalarField n0 = initial_density(c, params);
    const ScalarField b1 = ref ? ref->snapshots.front().b1 : limit_b1_at_start(c);
    const KineticOptions kopt = kinetic_options(c);
    KineticStepper stepper(params, initial_distribution(c, n0, params), initial_fields(n0, params, &b1), kopt);
    const bool picard = c.mode_name == "picard";
    const double delta = c.delta > 0 ? c.delta : 1.5 * params.grid().min_spacing();

    std::unique_ptr<RecordWriter> writer;
    if (!options.out_dir.empty()) {
        fs::create_directories(options.out_dir);
        write_resolved_config(c, options.out_dir / "resolved-config.toml");
        writer = std::make_unique<RecordWriter>(options.out_dir / "records.csv");
    }

    KineticRunStats& st = res.stats;
    st.initial_mass = stepper.f().mass();
    st.min_value = stepper.f().min();
    st.max_div_b = div_b_norm(stepper.em().B);
    st.max_free_energy_rate = -std::numeric_limits<double>::infinity();
    const double rate = 1.0 / (params.eps * params.tau);
    double d_prev = dissipation(stepper.f(), params) * rate;
    double g_prev = free_energy(stepper.f(), stepper.em(), params);

    auto emit = [&](std::size_t k) {
        const LimitState* r = ref ? &ref->snapshots[k] : nullptr;
        DiagnosticsRecord rec = kinetic_record(stepper.f(), stepper.em(), params, r);
        if (r) {
            res.sup_modulated_energy = std::max(res.sup_modulated_energy, rec.modulated_energy);
            res.sup_kinetic_relative_entropy =
                std::max(res.sup_kinetic_relative_entropy, rec.kinetic_relative_entropy);
            const KullbackCheck ck = csiszar_kullback_check(density(stepper.f()), r->n);
            if (!ck.holds()) ++res.ck_violations;
            if (ck.rhs > 0) res.ck_max_ratio = std::max(res.ck_max_ratio, ck.lhs / ck.rhs);
            else if (ck.lhs > 0) res.ck_max_ratio = std::numeric_limits<double>::infinity();
        }
        res.records.push_back(rec);
        if (writer) writer->write(rec);
    };
    emit(0);

    try {
        for (std::size_t s = 0; s < res.plan.samples && c.T > 0; ++s) {
            for (std::size_t j = 0; j < res.plan.steps_per_sample; ++j) {
                if (picard) stepper.picard_cycle(res.plan.dt, delta);
                else stepper.strang_step(res.plan.dt);

                const DistributionField& f = stepper.f();
                const EMState& em = stepper.em();
                st.max_mass_drift = std::max(st.max_mass_drift, std::abs(f.mass() - st.initial_mass) / st.initial_mass);
                st.min_value = std::min(st.min_value, f.min());
                st.max_div_b = std::max(st.max_div_b, div_b_norm(em.B));
                st.max_gauss_residual = std::max(
                    st.max_gauss_residual, gauss_residual(em.E, charge_density(density(f), params), params));
                const double d = dissipation(f, params) * rate;
                st.integrated_dissipation += 0.5 * res.plan.dt * (d_prev + d);
                const double g = free_energy(f, em, params) + st.integrated_dissipation;
                st.max_free_energy_rate = std::max(st.max_free_energy_rate, (g - g_prev) / res.plan.dt);
                d_prev = d;
                g_prev = g;
                if (picard)
                    st.max_picard_iterations =
                        std::max(st.max_picard_iterations, stepper.last_report().residuals.size());
                if (options.on_step) options.on_step(stepper);
            }
            emit(s + 1);
        }
    } catch (const std::exception& e) {
        spdlog::error("run_kinetic eps={} t={}: {}", eps, stepper.time(), e.what());
        throw;
    }
    if (!(st.max_free_energy_rate > -std::numeric_limits<double>::infinity())) st.max_free_energy_rate = 0.0;

    const DiagnosticsRecord& r0 = res.records.front();
    res.energy_bound = kinetic_energy_bound_check(res.records, params, r0.mass, r0.kinetic_energy + r0.field_energy);
    res.f = stepper.f();
    res.em = stepper.em();

    if (!options.out_dir.empty()) {
        save_checkpoint(options.out_dir, res.f, res.em, params);
        write_json(options.out_dir / "manifest.json",
                   json{{"kind", "kinetic"},
                        {"complete", true},
                        {"eps", eps},
                        {"mode", c.mode_name},
                        {"T", c.T},
                        {"samples", c.samples},
                        {"dt", res.plan.dt},
                        {"steps", res.plan.total_steps()},
                        {"records", "records.csv"},
                        {"checkpoint", "checkpoint.json"},
                        {"max_mass_drift", st.max_mass_drift},
                        {"min_value", st.min_value},
                        {"max_div_b", st.max_div_b},
                        {"max_gauss_residual", st.max_gauss_residual},
                        {"integrated_dissipation", st.integrated_dissipation},
                        {"max_free_energy_rate", st.max_free_energy_rate},
                        {"kinetic_energy_margin", res.energy_bound.margin}});
    }
    return res;
}

}  // namespace vmfp
