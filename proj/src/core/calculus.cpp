#include "vmfp/core/calculus.hpp"

#include "vmfp/core/spectral.hpp"

namespace vmfp {

namespace {

ScalarField spectral_partial(const ScalarField& s, int axis) {
    const PerpGrid& g = s.grid();
    Spectrum sp = forward(s);
    const std::complex<double> I(0.0, 1.0);
    for (int i = 0; i < sp.n1(); ++i)
        for (int j = 0; j < sp.n2h(); ++j) {
            const double k = axis == 0 ? derivative_wavenumber1(g, i) : derivative_wavenumber2(g, j);
            sp.at(i, j) *= I * k;
        }
    return inverse(sp);
}

// Periodic central differences: weight w[r - 1] on s(i + r) - s(i - r).
ScalarField central_partial(const ScalarField& s, int axis, int order) {
    const PerpGrid& g = s.grid();
    const int n1 = g.n1(), n2 = g.n2();
    const double h = axis == 0 ? g.h1() : g.h2();
    const double w2[1] = {0.5 / h};
    const double w4[2] = {2.0 / (3.0 * h), -1.0 / (12.0 * h)};
    const double* w = order == 2 ? w2 : w4;
    const int reach = order / 2;
    ScalarField out(g);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            double acc = 0.0;
            for (int r = 1; r <= reach; ++r) {
                if (axis == 0)
                    acc += w[r - 1] * (s.at((i + r) % n1, j) - s.at((i + n1 - r) % n1, j));
                else
                    acc += w[r - 1] * (s.at(i, (j + r) % n2) - s.at(i, (j + n2 - r) % n2));
            }
            out.at(i, j) = acc;
        }
    return out;
}

}  // namespace

ScalarField partial(const ScalarField& s, int axis, DiffScheme scheme) {
    switch (scheme) {
        case DiffScheme::Central2:
            return central_partial(s, axis, 2);
        case DiffScheme::Central4:
            return central_partial(s, axis, 4);
        case DiffScheme::Spectral:
            break;
    }
    return spectral_partial(s, axis);
}

VectorField gradient(const ScalarField& s, DiffScheme scheme) {
    return VectorField(partial(s, 0, scheme), partial(s, 1, scheme), ScalarField(s.grid()));
}

ScalarField divergence(const VectorField& v, DiffScheme scheme) {
    return partial(v[0], 0, scheme) + partial(v[1], 1, scheme);
}

ScalarField curl_z(const VectorField& v, DiffScheme scheme) {
    return partial(v[1], 0, scheme) - partial(v[0], 1, scheme);
}

VectorField curl(const VectorField& v, DiffScheme scheme) {
    return VectorField(partial(v[2], 1, scheme), -1.0 * partial(v[2], 0, scheme),
                       curl_z(v, scheme));
}

}  // namespace vmfp
