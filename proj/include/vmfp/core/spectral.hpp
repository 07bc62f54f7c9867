#pragma once

#include <complex>
#include <vector>

#include "vmfp/core/field.hpp"

namespace vmfp {

/// Half-complex 2D spectrum of a real field: n1 x (n2/2 + 1) coefficients,
/// unnormalized FFTW convention (inverse() divides by n1*n2).
struct Spectrum {
    PerpGrid grid;
    std::vector<std::complex<double>> c;

    int n1() const { return grid.n1(); }
    int n2h() const { return grid.n2() / 2 + 1; }
    std::complex<double>& at(int i, int j) { return c[static_cast<std::size_t>(i) * n2h() + j]; }
    std::complex<double> at(int i, int j) const { return c[static_cast<std::size_t>(i) * n2h() + j]; }
};

Spectrum forward(const ScalarField& s);
ScalarField inverse(const Spectrum& s);

/// Angular wavenumber of row i (axis 1) or column j (axis 2).
double wavenumber1(const PerpGrid& g, int i);
double wavenumber2(const PerpGrid& g, int j);
/// Wavenumber used for first derivatives: zero on the Nyquist row/column so that
/// derivatives of real fields stay real.
double derivative_wavenumber1(const PerpGrid& g, int i);
double derivative_wavenumber2(const PerpGrid& g, int j);

}  // namespace vmfp
