#include <cmath>
#include <vector>

#include "interp.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/kinetic/kinetic.hpp"

namespace vmfp {

namespace {

struct Tap {
    int d1, d2;
    double w;
};

std::vector<Tap> taps(const PerpGrid& g, double delta) {
    if (!(delta >= 0.0)) throw ParameterError("mollify: delta must be nonnegative");
    if (delta > 0.5 * g.length()) throw ParameterError("mollify: delta larger than L/2");
    std::vector<Tap> t;
    const int r1 = static_cast<int>(std::ceil(delta / g.h1()));
    const int r2 = static_cast<int>(std::ceil(delta / g.h2()));
    double total = 0.0;
    for (int d1 = -r1; d1 <= r1; ++d1)
        for (int d2 = -r2; d2 <= r2; ++d2) {
            const double x = d1 * g.h1(), y = d2 * g.h2();
            const double q = (x * x + y * y) / (delta * delta);
            if (delta == 0.0 ? (d1 != 0 || d2 != 0) : q >= 1.0) continue;
            const double w = delta == 0.0 ? 1.0 : std::exp(-1.0 / (1.0 - q));
            t.push_back({d1, d2, w});
            total += w;
        }
    for (auto& tp : t) tp.w /= total;
    return t;
}

}  // namespace

ScalarField mollifier_kernel(const PerpGrid& grid, double delta) {
    ScalarField k(grid);
    for (const auto& t : taps(grid, delta))
        k.at(detail::wrap_index(t.d1, grid.n1()), detail::wrap_index(t.d2, grid.n2())) += t.w;
    return k;
}

ScalarField mollify(const ScalarField& s, double delta) {
    const PerpGrid& g = s.grid();
    const auto t = taps(g, delta);
    if (t.size() == 1) return s;
    ScalarField out(g);
    const int n1 = g.n1(), n2 = g.n2();
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            double acc = 0.0;
            for (const auto& tp : t)
                acc += tp.w * s.at(detail::wrap_index(i - tp.d1, n1), detail::wrap_index(j - tp.d2, n2));
            out.at(i, j) = acc;
        }
    return out;
}

VectorField mollify(const VectorField& v, double delta) {
    return VectorField(mollify(v[0], delta), mollify(v[1], delta), mollify(v[2], delta));
}

}  // namespace vmfp
