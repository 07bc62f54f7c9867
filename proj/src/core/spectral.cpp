#include "vmfp/core/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace vmfp {

namespace {

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// FFTW planning is not thread safe; execution with the new-array interface is.
// Plans are created unaligned so that arbitrary std::vector storage can be passed.
const PlanPair& plans_for(int n1, int n2) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n1, n2});
    if (it != cache.end()) return it->second;
    const std::size_t nr = static_cast<std::size_t>(n1) * n2;
    const std::size_t nc = static_cast<std::size_t>(n1) * (n2 / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_2d(n1, n2, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.c2r = fftw_plan_dft_c2r_2d(n1, n2, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(r);
    fftw_free(c);
    return cache.emplace(std::make_pair(n1, n2), p).first->second;
}

}  // namespace

Spectrum forward(const ScalarField& s) {
    const PerpGrid& g = s.grid();
    Spectrum out{g, std::vector<std::complex<double>>(static_cast<std::size_t>(g.n1()) * (g.n2() / 2 + 1))};
    const auto& p = plans_for(g.n1(), g.n2());
    // r2c leaves its input intact for out-of-place transforms
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(s.data()),
                         reinterpret_cast<fftw_complex*>(out.c.data()));
    return out;
}

ScalarField inverse(const Spectrum& s) {
    const PerpGrid& g = s.grid;
    auto work = s.c;  // c2r overwrites its input
    ScalarField out(g);
    const auto& p = plans_for(g.n1(), g.n2());
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(work.data()), out.data());
    out *= 1.0 / static_cast<double>(g.size());
    return out;
}

double wavenumber1(const PerpGrid& g, int i) {
    const int k = i <= g.n1() / 2 ? i : i - g.n1();
    return 2.0 * std::numbers::pi * k / g.length();
}

double wavenumber2(const PerpGrid& g, int j) {
    return 2.0 * std::numbers::pi * j / g.length();
}

double derivative_wavenumber1(const PerpGrid& g, int i) {
    return i == g.n1() / 2 ? 0.0 : wavenumber1(g, i);
}

double derivative_wavenumber2(const PerpGrid& g, int j) {
    return j == g.n2() / 2 ? 0.0 : wavenumber2(g, j);
}

}  // namespace vmfp
