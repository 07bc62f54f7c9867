// Command-line front end: run-kinetic, run-limit, sweep, check, diag.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <spdlog/spdlog.h>

#include "vmfp/core/errors.hpp"
#include "vmfp/diagnostics/records.hpp"
#include "vmfp/harness/check.hpp"
#include "vmfp/harness/config.hpp"
#include "vmfp/harness/runs.hpp"
#include "vmfp/harness/sweep.hpp"
#include "vmfp/kinetic/checkpoint.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::optional<double> eps;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string mode;
};

vmfp::ScenarioConfig resolve(const Common& o) {
    vmfp::ScenarioConfig c = o.config.empty() ? vmfp::ScenarioConfig{} : vmfp::load_config(o.config);
    if (o.eps) c.eps = *o.eps;
    if (!o.out.empty()) c.out = o.out;
    if (o.seed) c.seed = *o.seed;
    if (!o.mode.empty()) c.mode_name = o.mode;
    c.validate();
    return c;
}

void add_common(CLI::App* cmd, Common& o, bool with_eps) {
    cmd->add_option("--config", o.config, "scenario file (TOML subset)")->check(CLI::ExistingFile);
    if (with_eps) cmd->add_option("--eps", o.eps, "scaling parameter in (0, 1]");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "seed for randomized checks");
    cmd->add_option("--mode", o.mode, "kinetic time stepper")->check(CLI::IsMember({"strang", "picard"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vlasov-Maxwell-Fokker-Planck solver with a strong external magnetic field"};
    app.require_subcommand(1);
    Common kin, lim, sw, chk;
    std::string diag_dir;

    auto* run_kinetic = app.add_subcommand("run-kinetic", "kinetic run to T");
    add_common(run_kinetic, kin, true);
    auto* run_limit = app.add_subcommand("run-limit", "drift-fluid limit run to T");
    add_common(run_limit, lim, false);
    auto* sweep = app.add_subcommand("sweep", "limit run followed by kinetic runs for every eps");
    add_common(sweep, sw, false);
    auto* check = app.add_subcommand("check", "fast randomized invariant suite");
    check->add_option("--seed", chk.seed, "random seed");
    auto* diag = app.add_subcommand("diag", "recompute diagnostics from a checkpoint directory");
    diag->add_option("--out", diag_dir, "directory holding checkpoint.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_kinetic) {
            const auto c = resolve(kin);
            vmfp::KineticRunOptions opt;
            opt.out_dir = c.out;
            const auto r = vmfp::run_kinetic(c, c.eps, opt);
            spdlog::info("run-kinetic: {} steps of {:.3e}, records in {}", r.plan.total_steps(), r.plan.dt,
                         (fs::path(c.out) / "records.csv").string());
        } else if (*run_limit) {
            const auto c = resolve(lim);
            const auto r = vmfp::run_limit(c, c.out);
            spdlog::info("run-limit: {} steps of {:.3e}, records in {}", r.plan.total_steps(), r.plan.dt,
                         (fs::path(c.out) / "records.csv").string());
        } else if (*sweep) {
            const auto c = resolve(sw);
            const auto m = vmfp::run_epsilon_sweep(c, c.out);
            for (const auto& e : m.runs)
                std::printf("eps=%-8g sup_ME=%.6e sup_KRE=%.6e diss=%.6e\n", e.eps, e.sup_modulated_energy,
                            e.sup_kinetic_relative_entropy, e.integrated_dissipation);
            if (m.slope) std::printf("slope=%.4f\n", *m.slope);
            else std::printf("slope=n/a\n");
        } else if (*check) {
            int failed = 0;
            for (const auto& r : vmfp::run_invariant_suite(chk.seed.value_or(0))) {
                std::printf("%s  %-50s value=%.3e bound=%.3e\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                            r.value, r.threshold);
                failed += !r.passed;
            }
            return failed ? 1 : 0;
        } else if (*diag) {
            std::cout << "kind";
            for (const auto& col : vmfp::record_columns()) std::cout << ',' << col;
            std::cout << '\n';
            if (vmfp::checkpoint_kind(diag_dir) == "limit") {
                const auto ck = vmfp::load_limit_checkpoint(diag_dir);
                std::cout << "limit," << vmfp::format_record(vmfp::limit_record(ck.state, ck.params)) << '\n';
            } else {
                const auto ck = vmfp::load_kinetic_checkpoint(diag_dir);
                std::cout << "kinetic," << vmfp::format_record(vmfp::kinetic_record(ck.f, ck.em, ck.params))
                          << '\n';
            }
        }
    } catch (const vmfp::ConfigError& e) {
        spdlog::error("config: {}", e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
