#include "vmfp/harness/sweep.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "vmfp/core/errors.hpp"
#include "vmfp/harness/runs.hpp"

namespace vmfp {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::pair<double, double>> loglog_fit(const std::vector<double>& x,
                                                    const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0 && y[k] > 0)) return std::nullopt;
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(x.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return std::nullopt;
    const double slope = (n * sxy - sx * sy) / den;
    return std::pair{slope, (sy - slope * sx) / n};
}

SweepManifest run_epsilon_sweep(const ScenarioConfig& c, const fs::path& out_dir) {
    c.validate();
    SweepManifest m;
    m.mode = c.mode_name;
    m.T = c.T;
    m.samples = c.samples;
    m.n1 = c.n1;
    m.n2 = c.n2;
    m.nv = c.nv;
    m.epsilons = c.epsilons;
    const bool persist = !out_dir.empty();
    if (persist) {
        fs::create_directories(out_dir);
        write_resolved_config(c, out_dir / "resolved-config.toml");
    }

    try {
        const LimitRunResult limit = run_limit(c, persist ? out_dir / "limit" : fs::path{});
        if (persist) m.limit_records = "limit/records.csv";
        const LimitTrajectory& reference = limit.trajectory;

        for (std::size_t k = 0; k < c.epsilons.size(); ++k) {
            const double eps = c.epsilons[k];
            const std::string sub = "eps_" + std::to_string(k);
            spdlog::info("sweep: eps = {} ({}/{})", eps, k + 1, c.epsilons.size());
            KineticRunOptions opt;
            opt.reference = &reference;
            if (persist) opt.out_dir = out_dir / sub;
            const KineticRunResult r = run_kinetic(c, eps, opt);

            SweepEntry e;
            e.eps = eps;
            e.dt = r.plan.dt;
            e.steps = c.T > 0 ? r.plan.total_steps() : 0;
            e.records = persist ? sub + "/records.csv" : std::string{};
            e.sup_modulated_energy = r.sup_modulated_energy;
            e.sup_kinetic_relative_entropy = r.sup_kinetic_relative_entropy;
            e.integrated_dissipation = r.stats.integrated_dissipation;
            e.ck_max_ratio = r.ck_max_ratio;
            e.ck_violations = r.ck_violations;
            e.kinetic_energy_margin = r.energy_bound.margin;
            e.max_mass_drift = r.stats.max_mass_drift;
            e.min_value = r.stats.min_value;
            m.runs.push_back(e);
        }
    } catch (const std::exception& e) {
        m.complete = false;
        m.error = e.what();
        if (persist) write_manifest(m, out_dir / "manifest.json");
        throw;
    }

    std::vector<double> x, y;
    for (const auto& e : m.runs) {
        x.push_back(e.eps);
        y.push_back(e.sup_modulated_energy);
    }
    if (auto fit = loglog_fit(x, y)) {
        m.slope = fit->first;
        m.intercept = fit->second;
    }
    m.complete = true;
    if (persist) write_manifest(m, out_dir / "manifest.json");
    return m;
}

void write_manifest(const SweepManifest& m, const fs::path& path) {
    json runs = json::array();
    for (const auto& e : m.runs)
        runs.push_back({{"eps", e.eps},
                        {"dt", e.dt},
                        {"steps", e.steps},
                        {"records", e.records},
                        {"sup_modulated_energy", e.sup_modulated_energy},
                        {"sup_kinetic_relative_entropy", e.sup_kinetic_relative_entropy},
                        {"integrated_dissipation", e.integrated_dissipation},
                        {"ck_max_ratio", e.ck_max_ratio},
                        {"ck_violations", e.ck_violations},
                        {"kinetic_energy_margin", e.kinetic_energy_margin},
                        {"max_mass_drift", e.max_mass_drift},
                        {"min_value", e.min_value}});
    json j{{"kind", "sweep"},
           {"complete", m.complete},
           {"mode", m.mode},
           {"T", m.T},
           {"samples", m.samples},
           {"grid", {{"n1", m.n1}, {"n2", m.n2}, {"nv", m.nv}}},
           {"epsilons", m.epsilons},
           {"limit_records", m.limit_records},
           {"runs", runs},
           {"fit", m.slope ? json{{"slope", *m.slope}, {"intercept", *m.intercept}} : json(nullptr)}};
    if (!m.error.empty()) j["error"] = m.error;
    std::ofstream out(path);
    if (!out) throw StateError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

SweepManifest read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw StateError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw StateError("malformed manifest " + path.string() + ": " + e.what());
    }
    if (j.value("kind", "") != "sweep") throw StateError(path.string() + " is not a sweep manifest");
    SweepManifest m;
    m.complete = j.at("complete").get<bool>();
    m.error = j.value("error", "");
    m.mode = j.at("mode").get<std::string>();
    m.T = j.at("T").get<double>();
    m.samples = j.at("samples").get<int>();
    m.n1 = j.at("grid").at("n1").get<int>();
    m.n2 = j.at("grid").at("n2").get<int>();
    m.nv = j.at("grid").at("nv").get<int>();
    m.epsilons = j.at("epsilons").get<std::vector<double>>();
    m.limit_records = j.at("limit_records").get<std::string>();
    for (const auto& r : j.at("runs")) {
        SweepEntry e;
        e.eps = r.at("eps").get<double>();
        e.dt = r.at("dt").get<double>();
        e.steps = r.at("steps").get<std::size_t>();
        e.records = r.at("records").get<std::string>();
        e.sup_modulated_energy = r.at("sup_modulated_energy").get<double>();
        e.sup_kinetic_relative_entropy = r.at("sup_kinetic_relative_entropy").get<double>();
        e.integrated_dissipation = r.at("integrated_dissipation").get<double>();
        e.ck_max_ratio = r.at("ck_max_ratio").get<double>();
        e.ck_violations = r.at("ck_violations").get<std::size_t>();
        e.kinetic_energy_margin = r.at("kinetic_energy_margin").get<double>();
        e.max_mass_drift = r.at("max_mass_drift").get<double>();
        e.min_value = r.at("min_value").get<double>();
        m.runs.push_back(e);
    }
    if (!j.at("fit").is_null()) {
        m.slope = j.at("fit").at("slope").get<double>();
        m.intercept = j.at("fit").at("intercept").get<double>();
    }
    return m;
}

}  // namespace vmfp
