#pragma once

#include <algorithm>
#include <cmath>

namespace vmfp::detail {

constexpr int kMaxStencil = 6;

/// Lagrange weights of the order+1 nodes surrounding index-space position s.
/// Returns the first node of the stencil; the enclosing cell is [base+half, base+half+1].
inline int lagrange_stencil(double s, int order, double* w) {
    const int half = (order - 1) / 2;
    const double fl = std::floor(s);
    const int base = static_cast<int>(fl) - half;
    const double x = s - base;
    for (int k = 0; k <= order; ++k) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m <= order; ++m) {
            if (m == k) continue;
            num *= x - m;
            den *= k - m;
        }
        w[k] = num / den;
    }
    return base;
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

inline int wrap_index(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

}  // namespace vmfp::detail
