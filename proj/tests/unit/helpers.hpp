#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"
#include "vmfp/core/velocity.hpp"

namespace testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Sum of a few random low Fourier modes around `base`; band-limited well below Nyquist.
inline vmfp::ScalarField random_smooth(const vmfp::PerpGrid& g, std::mt19937_64& rng,
                                       double base, double amp, int kmax = 2) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    vmfp::ScalarField s(g, base);
    const double k0 = kTwoPi / g.length();
    for (int a = 0; a <= kmax; ++a)
        for (int b = -kmax; b <= kmax; ++b) {
            if (a == 0 && b <= 0) continue;
            const double c = amp * u(rng) / (1 + a * a + b * b), ph = kTwoPi * u(rng);
            for (int i = 0; i < g.n1(); ++i)
                for (int j = 0; j < g.n2(); ++j)
                    s.at(i, j) += c * std::cos(k0 * (a * g.x1(i) + b * g.x2(j)) + ph);
        }
    return s;
}

inline vmfp::VectorField random_smooth_vector(const vmfp::PerpGrid& g, std::mt19937_64& rng,
                                              double amp) {
    return vmfp::VectorField(random_smooth(g, rng, 0.0, amp), random_smooth(g, rng, 0.0, amp),
                             random_smooth(g, rng, 0.0, amp));
}

/// n(x) times the grid-normalized Maxwellian at every node.
inline vmfp::DistributionField local_maxwellian(const vmfp::ScalarField& n, const vmfp::VelGrid& vg,
                                                double sigma = 1.0) {
    vmfp::DistributionField f(n.grid(), vg);
    const auto M = vmfp::grid_maxwellian(vg, sigma);
    for (std::size_t ix = 0; ix < n.size(); ++ix)
        for (std::size_t k = 0; k < M.size(); ++k) f.node(ix)[k] = n[ix] * M[k];
    return f;
}

/// Maxwellian shifted by u at every node, scaled by n(x), using the continuous normalization.
inline vmfp::DistributionField shifted_maxwellian(const vmfp::ScalarField& n, const vmfp::VelGrid& vg,
                                                  const vmfp::Vec3& u, double sigma = 1.0) {
    vmfp::DistributionField f(n.grid(), vg);
    for (std::size_t ix = 0; ix < n.size(); ++ix)
        for (int a = 0; a < vg.nv(); ++a)
            for (int b = 0; b < vg.nv(); ++b)
                for (int c = 0; c < vg.nv(); ++c)
                    f.node(ix)[vg.index(a, b, c)] =
                        n[ix] * vmfp::maxwellian({vg.node(a) - u[0], vg.node(b) - u[1], vg.node(c) - u[2]}, sigma);
    return f;
}

inline double max_abs(const vmfp::ScalarField& s) {
    double m = 0.0;
    for (double v : s.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const vmfp::VectorField& v) {
    return std::max({max_abs(v[0]), max_abs(v[1]), max_abs(v[2])});
}

}  // namespace testing
