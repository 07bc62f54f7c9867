#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "interp.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/kinetic/kinetic.hpp"

namespace vmfp {

namespace {

using detail::kMaxStencil;
using detail::lagrange_stencil;
using detail::wrap_index;

struct Shift {
    int base;  // stencil start relative to the target index
    std::array<double, kMaxStencil> w;
};

std::vector<Shift> shifts(const VelGrid& vg, double cells_per_unit_v, int order) {
    std::vector<Shift> s(vg.nv());
    for (int a = 0; a < vg.nv(); ++a)
        s[a].base = lagrange_stencil(-vg.node(a) * cells_per_unit_v, order, s[a].w.data());
    return s;
}

// Along x1 the shift depends only on the v1 index; each (i2, a) pair moves a contiguous
// nv*nv run of the block, so the inner loop is unit stride.
void sweep_x1(DistributionField& f, double dt, double eps, const KineticOptions& opt,
              std::vector<double>& out) {
    const PerpGrid& xg = f.xgrid();
    const VelGrid& vg = f.vgrid();
    const int n1 = xg.n1(), n2 = xg.n2(), nv = vg.nv(), np = opt.interp_order + 1;
    const std::size_t run = static_cast<std::size_t>(nv) * nv, blk = f.block();
    const auto sh = shifts(vg, dt / (eps * xg.h1()), opt.interp_order);
    const double* in = f.values().data();
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            double* o = out.data() + xg.index(i1, i2) * blk;
            for (int a = 0; a < nv; ++a) {
                double* oa = o + a * run;
                std::fill(oa, oa + run, 0.0);
                for (int k = 0; k < np; ++k) {
                    const int src = wrap_index(i1 + sh[a].base + k, n1);
                    const double w = sh[a].w[k];
                    const double* ia = in + xg.index(src, i2) * blk + a * run;
                    for (std::size_t r = 0; r < run; ++r) oa[r] += w * ia[r];
                }
            }
        }
}

void sweep_x2(DistributionField& f, double dt, double eps, const KineticOptions& opt,
              std::vector<double>& out) {
    const PerpGrid& xg = f.xgrid();
    const VelGrid& vg = f.vgrid();
    const int n1 = xg.n1(), n2 = xg.n2(), nv = vg.nv(), np = opt.interp_order + 1;
    const std::size_t blk = f.block();
    const auto sh = shifts(vg, dt / (eps * xg.h2()), opt.interp_order);
    const double* in = f.values().data();
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            double* o = out.data() + xg.index(i1, i2) * blk;
            std::fill(o, o + blk, 0.0);
            for (int k = 0; k < np; ++k) {
                for (int b = 0; b < nv; ++b) {
                    const int src = wrap_index(i2 + sh[b].base + k, n2);
                    const double w = sh[b].w[k];
                    const double* ib = in + xg.index(i1, src) * blk;
                    for (int a = 0; a < nv; ++a) {
                        const std::size_t off = (static_cast<std::size_t>(a) * nv + b) * nv;
                        for (int c = 0; c < nv; ++c) o[off + c] += w * ib[off + c];
                    }
                }
            }
        }
}

// The k1 = n1/2 and k2 = n2/2 lines of every velocity slice. The shift is a convolution,
// so it cannot create them, but the velocity substeps multiply by x-dependent fields and
// do; left in place, the v-dependent shift leaks them into the density where no discrete
// divergence of E can balance them.
void drop_nyquist(DistributionField& f) {
    const PerpGrid& xg = f.xgrid();
    const int n1 = xg.n1(), n2 = xg.n2();
    const std::size_t blk = f.block();
    double* v = f.values().data();
    std::vector<double> acc(std::max(n1, n2) * blk);

    std::fill(acc.begin(), acc.begin() + n2 * blk, 0.0);
    for (int i1 = 0; i1 < n1; ++i1) {
        const double sgn = (i1 & 1) ? -1.0 : 1.0;
        for (int i2 = 0; i2 < n2; ++i2) {
            const double* p = v + xg.index(i1, i2) * blk;
            double* a = acc.data() + i2 * blk;
            for (std::size_t k = 0; k < blk; ++k) a[k] += sgn * p[k];
        }
    }
    for (int i1 = 0; i1 < n1; ++i1) {
        const double sgn = ((i1 & 1) ? -1.0 : 1.0) / n1;
        for (int i2 = 0; i2 < n2; ++i2) {
            double* p = v + xg.index(i1, i2) * blk;
            const double* a = acc.data() + i2 * blk;
            for (std::size_t k = 0; k < blk; ++k) p[k] -= sgn * a[k];
        }
    }

    for (int i1 = 0; i1 < n1; ++i1) {
        double* a = acc.data();
        std::fill(a, a + blk, 0.0);
        for (int i2 = 0; i2 < n2; ++i2) {
            const double sgn = (i2 & 1) ? -1.0 : 1.0;
            const double* p = v + xg.index(i1, i2) * blk;
            for (std::size_t k = 0; k < blk; ++k) a[k] += sgn * p[k];
        }
        for (int i2 = 0; i2 < n2; ++i2) {
            const double sgn = ((i2 & 1) ? -1.0 : 1.0) / n2;
            double* p = v + xg.index(i1, i2) * blk;
            for (std::size_t k = 0; k < blk; ++k) p[k] -= sgn * a[k];
        }
    }
}

}  // namespace

void apply_free_transport(DistributionField& f, double dt, double eps, const KineticOptions& opt) {
    if (!(dt > 0.0)) throw ParameterError("step_free_transport: dt must be positive");
    if (!(eps > 0.0)) throw ParameterError("step_free_transport: eps must be positive");
    std::vector<double> out(f.size());
    sweep_x1(f, dt, eps, opt, out);
    f.values().swap(out);
    sweep_x2(f, dt, eps, opt, out);
    f.values().swap(out);
    drop_nyquist(f);
}

DistributionField step_free_transport(const DistributionField& f, double dt, double eps,
                                      const KineticOptions& opt) {
    DistributionField out = f;
    apply_free_transport(out, dt, eps, opt);
    return out;
}

}  // namespace vmfp
