#include "vmfp/harness/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vmfp/core/errors.hpp"

namespace vmfp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '"') quoted = !quoted;
        if (s[k] == '#' && !quoted) return s.substr(0, k);
    }
    return s;
}

double to_number(const std::string& v, const std::string& key, int line) {
    const std::string t = trim(v);
    double x = 0.0;
    const char* end = t.data() + t.size();
    auto res = std::from_chars(t.data(), end, x);
    if (t.empty() || res.ec != std::errc() || res.ptr != end)
        throw ConfigError("line " + std::to_string(line) + ": " + key + " expects a number, got '" + t + "'", line);
    return x;
}

int to_int(const std::string& v, const std::string& key, int line) {
    const double x = to_number(v, key, line);
    if (x != std::floor(x)) throw ConfigError("line " + std::to_string(line) + ": " + key + " expects an integer", line);
    return static_cast<int>(x);
}

std::string to_string_value(const std::string& v, const std::string& key, int line) {
    const std::string t = trim(v);
    if (t.size() < 2 || t.front() != '"' || t.back() != '"')
        throw ConfigError("line " + std::to_string(line) + ": " + key + " expects a quoted string", line);
    return t.substr(1, t.size() - 2);
}

bool to_bool(const std::string& v, const std::string& key, int line) {
    const std::string t = trim(v);
    if (t == "true") return true;
    if (t == "false") return false;
    throw ConfigError("line " + std::to_string(line) + ": " + key + " expects true or false", line);
}

std::vector<double> to_list(const std::string& v, const std::string& key, int line) {
    const std::string t = trim(v);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ConfigError("line " + std::to_string(line) + ": " + key + " expects a list [a, b, ...]", line);
    std::vector<double> out;
    std::stringstream ss(t.substr(1, t.size() - 2));
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(to_number(item, key, line));
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> s = [] {
        std::map<std::string, Setter> m;
        auto num = [&m](const std::string& k, double ScenarioConfig::*f) {
            m[k] = [f, k](ScenarioConfig& c, const std::string& v, int l) { c.*f = to_number(v, k, l); };
        };
        auto integer = [&m](const std::string& k, int ScenarioConfig::*f) {
            m[k] = [f, k](ScenarioConfig& c, const std::string& v, int l) { c.*f = to_int(v, k, l); };
        };
        auto str = [&m](const std::string& k, std::string ScenarioConfig::*f) {
            m[k] = [f, k](ScenarioConfig& c, const std::string& v, int l) { c.*f = to_string_value(v, k, l); };
        };
        integer("grid.n1", &ScenarioConfig::n1);
        integer("grid.n2", &ScenarioConfig::n2);
        integer("grid.nv", &ScenarioConfig::nv);
        num("grid.L", &ScenarioConfig::length);
        num("grid.vmax", &ScenarioConfig::vmax);
        num("params.q", &ScenarioConfig::q);
        num("params.m", &ScenarioConfig::m);
        num("params.sigma", &ScenarioConfig::sigma);
        num("params.tau", &ScenarioConfig::tau);
        num("params.eps0", &ScenarioConfig::eps0);
        num("params.mu0", &ScenarioConfig::mu0);
        num("params.eps", &ScenarioConfig::eps);
        str("initial.family", &ScenarioConfig::family);
        num("initial.amplitude", &ScenarioConfig::amplitude);
        integer("initial.mode", &ScenarioConfig::mode);
        num("initial.drift", &ScenarioConfig::drift);
        str("initial.background", &ScenarioConfig::background);
        num("initial.background_amplitude", &ScenarioConfig::background_amplitude);
        str("initial.bext", &ScenarioConfig::bext);
        num("initial.b0", &ScenarioConfig::b0);
        num("initial.bext_amplitude", &ScenarioConfig::bext_amplitude);
        num("run.T", &ScenarioConfig::T);
        num("run.dt", &ScenarioConfig::dt);
        integer("run.samples", &ScenarioConfig::samples);
        str("run.out", &ScenarioConfig::out);
        str("run.mode", &ScenarioConfig::mode_name);
        m["run.epsilons"] = [](ScenarioConfig& c, const std::string& v, int l) {
            c.epsilons = to_list(v, "run.epsilons", l);
        };
        m["run.seed"] = [](ScenarioConfig& c, const std::string& v, int l) {
            const double x = to_number(v, "run.seed", l);
            if (x < 0 || x != std::floor(x)) throw ConfigError("line " + std::to_string(l) + ": run.seed expects a nonnegative integer", l);
            c.seed = static_cast<std::uint64_t>(x);
        };
        num("run.larmor_angle_max", &ScenarioConfig::larmor_angle_max);
        num("run.delta", &ScenarioConfig::delta);
        integer("run.interp_order", &ScenarioConfig::interp_order);
        m["run.moment_fix"] = [](ScenarioConfig& c, const std::string& v, int l) {
            c.moment_fix = to_bool(v, "run.moment_fix", l);
        };
        m["run.monotone"] = [](ScenarioConfig& c, const std::string& v, int l) {
            c.monotone = to_bool(v, "run.monotone", l);
        };
        str("run.collision", &ScenarioConfig::collision);
        str("run.limiter", &ScenarioConfig::limiter);
        integer("run.picard_max_iter", &ScenarioConfig::picard_max_iter);
        num("run.picard_tol", &ScenarioConfig::picard_tol);
        return m;
    }();
    return s;
}

bool one_of(const std::string& v, std::initializer_list<const char*> opts) {
    for (const char* o : opts)
        if (v == o) return true;
    return false;
}

}  // namespace

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError(field + ": " + why);
    };
    if (n1 < 4 || n2 < 4 || n1 % 2 || n2 % 2) fail("grid.n1/grid.n2", "must be even and >= 4");
    if (nv < 8) fail("grid.nv", "must be >= 8");
    if (!(length > 0)) fail("grid.L", "must be positive");
    if (vmax < 0) fail("grid.vmax", "must be nonnegative (0 selects 6 sqrt(sigma))");
    for (auto [name, v] : {std::pair{"params.q", q}, {"params.m", m}, {"params.sigma", sigma},
                           {"params.tau", tau}, {"params.eps0", eps0}, {"params.mu0", mu0}})
        if (!(v > 0)) fail(name, "must be positive");
    if (!(eps > 0 && eps <= 1)) fail("params.eps", "must lie in (0, 1]");
    if (!one_of(family, {"well_prepared", "equilibrium", "drifting"}))
        fail("initial.family", "unknown family '" + family + "'");
    if (!one_of(background, {"uniform", "cosine"}))
        fail("initial.background", "unknown family '" + background + "'");
    if (!one_of(bext, {"uniform", "cosine"})) fail("initial.bext", "unknown family '" + bext + "'");
    if (!(std::abs(amplitude) < 1)) fail("initial.amplitude", "must satisfy |a| < 1");
    if (mode < 1) fail("initial.mode", "must be >= 1");
    if (!(std::abs(background_amplitude) < 1)) fail("initial.background_amplitude", "must satisfy |d| < 1");
    if (!(b0 > 0)) fail("initial.b0", "must be positive");
    if (!(std::abs(bext_amplitude) < 1)) fail("initial.bext_amplitude", "must satisfy |b| < 1");
    if (!(T >= 0)) fail("run.T", "must be nonnegative");
    if (dt < 0) fail("run.dt", "must be nonnegative (0 selects the automatic policy)");
    if (samples < 1) fail("run.samples", "must be >= 1");
    if (!one_of(mode_name, {"strang", "picard"})) fail("run.mode", "must be strang or picard");
    if (epsilons.empty()) fail("run.epsilons", "must not be empty");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0 && epsilons[k] <= 1)) fail("run.epsilons", "entries must lie in (0, 1]");
        if (k && !(epsilons[k] < epsilons[k - 1])) fail("run.epsilons", "must be strictly decreasing");
    }
    if (!(larmor_angle_max > 0)) fail("run.larmor_angle_max", "must be positive");
    if (delta < 0) fail("run.delta", "must be nonnegative");
    if (interp_order != 3 && interp_order != 5) fail("run.interp_order", "must be 3 or 5");
    if (!one_of(collision, {"moment_consistent", "chang_cooper"}))
        fail("run.collision", "unknown scheme '" + collision + "'");
    if (!one_of(limiter, {"positivity", "koren", "van_leer", "minmod"}))
        fail("run.limiter", "unknown limiter '" + limiter + "'");
    if (picard_max_iter < 1) fail("run.picard_max_iter", "must be >= 1");
    if (!(picard_tol > 0)) fail("run.picard_tol", "must be positive");
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::stringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (!one_of(section, {"grid", "params", "initial", "run"}))
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value", line);
        if (section.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside of a section", line);
        const std::string key = section + "." + trim(s.substr(0, eq));
        auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("line " + std::to_string(line) + ": unknown key " + key, line);
        it->second(c, s.substr(eq + 1), line);
    }
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ScenarioConfig& c) {
    auto num = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        std::string s = buf;
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        return s;
    };
    auto str = [](const std::string& s) { return "\"" + s + "\""; };
    std::ostringstream o;
    o << "[grid]\n"
      << "n1 = " << c.n1 << "\nn2 = " << c.n2 << "\nnv = " << c.nv << "\n"
      << "L = " << num(c.length) << "\nvmax = " << num(c.vmax) << "\n\n"
      << "[params]\n"
      << "q = " << num(c.q) << "\nm = " << num(c.m) << "\nsigma = " << num(c.sigma)
      << "\ntau = " << num(c.tau) << "\neps0 = " << num(c.eps0) << "\nmu0 = " << num(c.mu0)
      << "\neps = " << num(c.eps) << "\n\n"
      << "[initial]\n"
      << "family = " << str(c.family) << "\namplitude = " << num(c.amplitude)
      << "\nmode = " << c.mode << "\ndrift = " << num(c.drift)
      << "\nbackground = " << str(c.background)
      << "\nbackground_amplitude = " << num(c.background_amplitude)
      << "\nbext = " << str(c.bext) << "\nb0 = " << num(c.b0)
      << "\nbext_amplitude = " << num(c.bext_amplitude) << "\n\n"
      << "[run]\n"
      << "T = " << num(c.T) << "\ndt = " << num(c.dt) << "\nsamples = " << c.samples
      << "\nout = " << str(c.out) << "\nmode = " << str(c.mode_name) << "\nepsilons = [";
    for (std::size_t k = 0; k < c.epsilons.size(); ++k) o << (k ? ", " : "") << num(c.epsilons[k]);
    o << "]\nseed = " << c.seed << "\nlarmor_angle_max = " << num(c.larmor_angle_max)
      << "\ndelta = " << num(c.delta) << "\ninterp_order = " << c.interp_order
      << "\nmonotone = " << (c.monotone ? "true" : "false")
      << "\nmoment_fix = " << (c.moment_fix ? "true" : "false")
      << "\ncollision = " << str(c.collision) << "\nlimiter = " << str(c.limiter)
      << "\npicard_max_iter = " << c.picard_max_iter
      << "\npicard_tol = " << num(c.picard_tol) << "\n";
    return o.str();
}

void write_resolved_config(const ScenarioConfig& c, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << format_config(c);
}

}  // namespace vmfp
