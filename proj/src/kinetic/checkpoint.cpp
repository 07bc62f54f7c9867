#include "vmfp/kinetic/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "vmfp/core/errors.hpp"

namespace vmfp {

namespace {

using nlohmann::json;

struct Array {
    std::string name;
    const double* data;
    std::size_t count;
};

void write_le(std::ofstream& out, const double* p, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            std::uint64_t u;
            std::memcpy(&u, p + k, 8);
            u = __builtin_bswap64(u);
            out.write(reinterpret_cast<const char*>(&u), 8);
        }
    }
}

void read_le(std::ifstream& in, double* p, std::size_t n) {
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw StateError("checkpoint: truncated binary payload");
    if constexpr (std::endian::native != std::endian::little) {
        for (std::size_t k = 0; k < n; ++k) {
            std::uint64_t u;
            std::memcpy(&u, p + k, 8);
            u = __builtin_bswap64(u);
            std::memcpy(p + k, &u, 8);
        }
    }
}

json params_json(const PlasmaParams& p) {
    return {{"q", p.q}, {"m", p.m}, {"sigma", p.sigma}, {"tau", p.tau},
            {"eps0", p.eps0}, {"mu0", p.mu0}, {"eps", p.eps}};
}

void write(const std::filesystem::path& dir, json header, const std::vector<Array>& arrays) {
    std::filesystem::create_directories(dir);
    std::ofstream bin(dir / "checkpoint.bin", std::ios::binary);
    if (!bin) throw StateError("checkpoint: cannot open " + (dir / "checkpoint.bin").string());
    json list = json::array();
    std::size_t offset = 0;
    for (const auto& a : arrays) {
        write_le(bin, a.data, a.count);
        list.push_back({{"name", a.name}, {"offset", offset}, {"count", a.count}});
        offset += a.count * sizeof(double);
    }
    header["layout"] = kCheckpointLayout;
    header["arrays"] = list;
    std::ofstream js(dir / "checkpoint.json");
    js << header.dump(2) << '\n';
}

struct Loaded {
    json header;
    std::map<std::string, std::vector<double>> arrays;
};

Loaded read(const std::filesystem::path& dir) {
    std::ifstream js(dir / "checkpoint.json");
    if (!js) throw StateError("checkpoint: missing " + (dir / "checkpoint.json").string());
    Loaded l;
    l.header = json::parse(js);
    if (l.header.value("layout", "") != kCheckpointLayout)
        throw StateError("checkpoint: unknown layout tag");
    std::ifstream bin(dir / "checkpoint.bin", std::ios::binary);
    if (!bin) throw StateError("checkpoint: missing checkpoint.bin");
    for (const auto& a : l.header["arrays"]) {
        std::vector<double> v(a["count"].get<std::size_t>());
        bin.seekg(static_cast<std::streamoff>(a["offset"].get<std::size_t>()));
        read_le(bin, v.data(), v.size());
        l.arrays[a["name"].get<std::string>()] = std::move(v);
    }
    return l;
}

PlasmaParams params_from(const Loaded& l, const PerpGrid& grid) {
    const json& j = l.header["params"];
    PlasmaParams p;
    p.q = j["q"];
    p.m = j["m"];
    p.sigma = j["sigma"];
    p.tau = j["tau"];
    p.eps0 = j["eps0"];
    p.mu0 = j["mu0"];
    p.eps = j["eps"];
    p.b_ext = ScalarField(grid);
    p.d_background = ScalarField(grid);
    p.b_ext.values() = l.arrays.at("b_ext");
    p.d_background.values() = l.arrays.at("d_background");
    return p;
}

PerpGrid grid_from(const json& h) {
    return PerpGrid(h["grid"]["L"].get<double>(), h["grid"]["n1"].get<int>(), h["grid"]["n2"].get<int>());
}

void fill(ScalarField& s, const Loaded& l, const std::string& name) {
    const auto& v = l.arrays.at(name);
    if (v.size() != s.size()) throw ShapeError("checkpoint: array " + name + " has wrong size");
    s.values() = v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const DistributionField& f,
                     const EMState& em, const PlasmaParams& params) {
    const PerpGrid& g = f.xgrid();
    json h = {{"kind", "kinetic"},
              {"grid", {{"L", g.length()}, {"n1", g.n1()}, {"n2", g.n2()}}},
              {"velocity", {{"vmax", f.vgrid().vmax()}, {"nv", f.vgrid().nv()}}},
              {"params", params_json(params)},
              {"time", f.time()},
              {"em_time", em.t}};
    const std::size_t n = g.size();
    write(dir, h,
          {{"f", f.values().data(), f.size()},
           {"E1", em.E[0].data(), n}, {"E2", em.E[1].data(), n}, {"E3", em.E[2].data(), n},
           {"B1", em.B[0].data(), n}, {"B2", em.B[1].data(), n}, {"B3", em.B[2].data(), n},
           {"b_ext", params.b_ext.data(), n}, {"d_background", params.d_background.data(), n}});
}

void save_checkpoint(const std::filesystem::path& dir, const LimitState& s,
                     const PlasmaParams& params) {
    const PerpGrid& g = s.n.grid();
    json h = {{"kind", "limit"},
              {"grid", {{"L", g.length()}, {"n1", g.n1()}, {"n2", g.n2()}}},
              {"params", params_json(params)},
              {"time", s.t}};
    const std::size_t n = g.size();
    write(dir, h,
          {{"n", s.n.data(), n},
           {"E1", s.E[0].data(), n}, {"E2", s.E[1].data(), n}, {"E3", s.E[2].data(), n},
           {"b1", s.b1.data(), n},
           {"b_ext", params.b_ext.data(), n}, {"d_background", params.d_background.data(), n}});
}

std::string checkpoint_kind(const std::filesystem::path& dir) {
    std::ifstream js(dir / "checkpoint.json");
    if (!js) throw StateError("checkpoint: missing " + (dir / "checkpoint.json").string());
    return json::parse(js).value("kind", "");
}

KineticCheckpoint load_kinetic_checkpoint(const std::filesystem::path& dir) {
    const Loaded l = read(dir);
    if (l.header.value("kind", "") != "kinetic") throw StateError("checkpoint: not a kinetic checkpoint");
    const PerpGrid g = grid_from(l.header);
    const VelGrid vg(l.header["velocity"]["vmax"].get<double>(), l.header["velocity"]["nv"].get<int>());
    KineticCheckpoint c;
    c.params = params_from(l, g);
    c.f = DistributionField(g, vg, l.header["time"].get<double>());
    const auto& fv = l.arrays.at("f");
    if (fv.size() != c.f.size()) throw ShapeError("checkpoint: array f has wrong size");
    c.f.values() = fv;
    c.em = EMState(g, l.header["em_time"].get<double>());
    const char* names[2][3] = {{"E1", "E2", "E3"}, {"B1", "B2", "B3"}};
    for (int k = 0; k < 3; ++k) {
        fill(c.em.E[k], l, names[0][k]);
        fill(c.em.B[k], l, names[1][k]);
    }
    return c;
}

LimitCheckpoint load_limit_checkpoint(const std::filesystem::path& dir) {
    const Loaded l = read(dir);
    if (l.header.value("kind", "") != "limit") throw StateError("checkpoint: not a limit checkpoint");
    const PerpGrid g = grid_from(l.header);
    LimitCheckpoint c;
    c.params = params_from(l, g);
    c.state = LimitState(g, l.header["time"].get<double>());
    fill(c.state.n, l, "n");
    fill(c.state.E[0], l, "E1");
    fill(c.state.E[1], l, "E2");
    fill(c.state.E[2], l, "E3");
    fill(c.state.b1, l, "b1");
    return c;
}

}  // namespace vmfp
