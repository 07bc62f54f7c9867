#include <cmath>
#include <vector>

#include "vmfp/core/errors.hpp"
#include "vmfp/kinetic/kinetic.hpp"

namespace vmfp {

std::vector<double> collision_face_weights(const VelGrid& vg, double sigma, CollisionScheme s) {
    const int nv = vg.nv();
    const double h = vg.h();
    std::vector<double> m(nv), c(nv - 1);
    for (int i = 0; i < nv; ++i) m[i] = std::exp(-vg.node(i) * vg.node(i) / (2.0 * sigma));
    if (s == CollisionScheme::MomentConsistent) {
        // c_{i+1/2} = -h sum_{j<=i} v_j m_j, a discrete sigma*m(v_{i+1/2})
        double acc = 0.0;
        for (int i = 0; i < nv - 1; ++i) {
            acc -= h * vg.node(i) * m[i];
            c[i] = acc;
        }
    } else {
        for (int i = 0; i < nv - 1; ++i) {
            const double w = h * 0.5 * (vg.node(i) + vg.node(i + 1)) / sigma;
            const double bern = std::abs(w) < 1e-12 ? 1.0 : w / std::expm1(w);
            c[i] = sigma * bern * m[i];
        }
    }
    for (double x : c)
        if (!(x > 0.0)) throw InternalError("collision: non-positive face weight");
    return c;
}

namespace {

// One axis of the relaxation operator, (L f)_i = (F_{i+1/2} - F_{i-1/2}) / h with
// F_{i+1/2} = c_{i+1/2} (f_{i+1}/m_{i+1} - f_i/m_i) / h and no flux through the ends.
struct AxisOperator {
    std::vector<double> lower, diag, upper;  // tridiagonal entries of L

    AxisOperator(const VelGrid& vg, double sigma, CollisionScheme s) {
        const int nv = vg.nv();
        const double h = vg.h();
        const auto c = collision_face_weights(vg, sigma, s);
        std::vector<double> m(nv);
        for (int i = 0; i < nv; ++i) m[i] = std::exp(-vg.node(i) * vg.node(i) / (2.0 * sigma));
        lower.assign(nv, 0.0);
        diag.assign(nv, 0.0);
        upper.assign(nv, 0.0);
        const double ih2 = 1.0 / (h * h);
        for (int i = 0; i < nv - 1; ++i) {
            // flux through face i+1/2 contributes +F to cell i and -F to cell i+1
            const double k = c[i] * ih2;
            upper[i] += k / m[i + 1];
            diag[i] -= k / m[i];
            lower[i + 1] += k / m[i];
            diag[i + 1] -= k / m[i + 1];
        }
    }
};

struct AxisSolver {
    int n;
    std::vector<double> lo, di, up;  // explicit part (I + (1-theta) dt L)
    std::vector<double> a, inv_den, cp;  // factorized implicit part (I - theta dt L)

    AxisSolver(const AxisOperator& L, double rdt, double theta) : n(static_cast<int>(L.diag.size())) {
        lo.resize(n);
        di.resize(n);
        up.resize(n);
        a.resize(n);
        inv_den.resize(n);
        cp.resize(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = (1.0 - theta) * rdt * L.lower[i];
            di[i] = 1.0 + (1.0 - theta) * rdt * L.diag[i];
            up[i] = (1.0 - theta) * rdt * L.upper[i];
        }
        double prev = 0.0;
        for (int i = 0; i < n; ++i) {
            a[i] = -theta * rdt * L.lower[i];
            const double b = 1.0 - theta * rdt * L.diag[i];
            const double c = -theta * rdt * L.upper[i];
            const double den = b - a[i] * prev;
            if (!(den > 0.0)) throw InternalError("collision: tridiagonal solve breakdown");
            inv_den[i] = 1.0 / den;
            cp[i] = c * inv_den[i];
            prev = cp[i];
        }
    }

    // Solves every line of the block that runs along one axis. Lines are laid out as
    // `outer` groups (stride `so`), `n` points per line (stride `sp`) and `inner`
    // contiguous lanes, so the recurrences vectorize over lanes.
    void apply(double* p, int outer, std::size_t so, std::size_t sp, int inner,
               std::vector<double>& rhs) const {
        for (int o = 0; o < outer; ++o) {
            double* base = p + o * so;
            for (int i = 0; i < n; ++i) {
                double* r = rhs.data() + static_cast<std::size_t>(i) * inner;
                const double* x = base + i * sp;
                for (int l = 0; l < inner; ++l) r[l] = di[i] * x[l];
                if (i > 0) {
                    const double* xm = base + (i - 1) * sp;
                    for (int l = 0; l < inner; ++l) r[l] += lo[i] * xm[l];
                }
                if (i < n - 1) {
                    const double* xp = base + (i + 1) * sp;
                    for (int l = 0; l < inner; ++l) r[l] += up[i] * xp[l];
                }
            }
            for (int i = 0; i < n; ++i) {
                double* r = rhs.data() + static_cast<std::size_t>(i) * inner;
                if (i > 0) {
                    const double* rp = r - inner;
                    for (int l = 0; l < inner; ++l) r[l] = (r[l] - a[i] * rp[l]) * inv_den[i];
                } else {
                    for (int l = 0; l < inner; ++l) r[l] *= inv_den[i];
                }
            }
            for (int i = n - 2; i >= 0; --i) {
                double* r = rhs.data() + static_cast<std::size_t>(i) * inner;
                const double* rn = r + inner;
                for (int l = 0; l < inner; ++l) r[l] -= cp[i] * rn[l];
            }
            for (int i = 0; i < n; ++i) {
                const double* r = rhs.data() + static_cast<std::size_t>(i) * inner;
                double* x = base + i * sp;
                for (int l = 0; l < inner; ++l) x[l] = r[l];
            }
        }
    }
};

}  // namespace

// Trapezoidal (Crank-Nicolson) in time when its explicit half keeps nonnegative
// coefficients, i.e. dt/2 * max|diag| <= 1; backward Euler otherwise.
void apply_collision(DistributionField& f, double dt, const PlasmaParams& params,
                     const KineticOptions& opt) {
    if (!(dt > 0.0)) throw ParameterError("step_collision: dt must be positive");
    const VelGrid& vg = f.vgrid();
    const int nv = vg.nv();
    const AxisOperator L(vg, params.sigma, opt.collision);
    const double rdt = dt / (params.eps * params.tau);
    double dmax = 0.0;
    for (double d : L.diag) dmax = std::max(dmax, std::abs(d));
    const double theta = 0.5 * rdt * dmax <= 1.0 ? 0.5 : 1.0;
    const AxisSolver S(L, rdt, theta);

    const std::size_t nv2 = static_cast<std::size_t>(nv) * nv;
    std::vector<double> rhs(nv2 * nv);
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        double* p = f.node(ix);
        S.apply(p, 1, 0, nv2, static_cast<int>(nv2), rhs);  // v1 lines
        S.apply(p, nv, nv2, nv, nv, rhs);                    // v2 lines
        S.apply(p, static_cast<int>(nv2), nv, 1, 1, rhs);    // v3 lines
    }
}

DistributionField step_collision(const DistributionField& f, double dt,
                                 const PlasmaParams& params, const KineticOptions& opt) {
    DistributionField out = f;
    apply_collision(out, dt, params, opt);
    return out;
}

}  // namespace vmfp
