// Velocity-space semi-Lagrangian substeps (Larmor rotation and acceleration).
//
// Both flows are interpolated through the Maxwellian ratio G = f / M: the new value at v
// is M(X) * I[G](X) with X the foot of the characteristic. The ratio is smooth and close
// to a low-degree polynomial for near-equilibrium states, so the interpolant reproduces
// n(x) M(v) and drifting Maxwellians far better than interpolating f directly. Out-of-grid
// stencil nodes are clamped to the boundary.
//
// Every map here is rigid in v (a rotation plus a translation), so the exact push-forward
// of the node values has mass, momentum and energy computable from the moments before the
// step. The interpolated block is multiplied by 1 + c.(1, v, |v|^2) with c chosen to hit
// those five targets; when that factor would turn negative anywhere, or the node is
// degenerate, only the mass is restored by a scalar rescale.

#include <array>
#include <cmath>
#include <vector>

#include "interp.hpp"
#include "vmfp/core/errors.hpp"
#include "vmfp/core/velocity.hpp"
#include "vmfp/kinetic/kinetic.hpp"

namespace vmfp {

namespace {

using detail::clamp_index;
using detail::kMaxStencil;
using detail::lagrange_stencil;

struct VelocityContext {
    int nv;
    int order;
    bool monotone;
    double h, vmax, sigma;
    std::vector<double> v;     // nodes
    std::vector<double> g1;    // exp(-v^2 / 2 sigma) per axis
    std::vector<double> inv_m; // 1 / M over the block

    VelocityContext(const VelGrid& vg, double sig, const KineticOptions& opt)
        : nv(vg.nv()), order(opt.interp_order), monotone(opt.monotone), h(vg.h()),
          vmax(vg.vmax()), sigma(sig), v(nv), g1(nv), inv_m(vg.size()) {
        for (int i = 0; i < nv; ++i) {
            v[i] = vg.node(i);
            g1[i] = std::exp(-v[i] * v[i] / (2.0 * sigma));
        }
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b)
                for (int c = 0; c < nv; ++c)
                    inv_m[vg.index(a, b, c)] = 1.0 / (g1[a] * g1[b] * g1[c]);
    }

    double position(double x) const { return (x + vmax) / h - 0.5; }
    double gauss(double x2) const { return std::exp(-x2 / (2.0 * sigma)); }
};

/// foot(v1, v2) = R (v1, v2) + o, identical for every v3.
struct PlaneMap {
    double r11, r12, r21, r22, o1, o2;
};

void ratio(const double* f, const VelocityContext& ctx, double* G) {
    const std::size_t n = ctx.inv_m.size();
    for (std::size_t k = 0; k < n; ++k) G[k] = f[k] * ctx.inv_m[k];
}

void plane_map(const double* G, double* out, const VelocityContext& ctx, const PlaneMap& pm) {
    const int nv = ctx.nv, np = ctx.order + 1, half = (ctx.order - 1) / 2;
    double wa[kMaxStencil], wb[kMaxStencil];
    std::vector<double> acc(nv), lo(nv), hi(nv);
    const double* rows[kMaxStencil][kMaxStencil];
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
            const double X1 = pm.r11 * ctx.v[a] + pm.r12 * ctx.v[b] + pm.o1;
            const double X2 = pm.r21 * ctx.v[a] + pm.r22 * ctx.v[b] + pm.o2;
            const int ia = lagrange_stencil(ctx.position(X1), ctx.order, wa);
            const int ib = lagrange_stencil(ctx.position(X2), ctx.order, wb);
            for (int k = 0; k < np; ++k)
                for (int l = 0; l < np; ++l)
                    rows[k][l] = G + (static_cast<std::size_t>(clamp_index(ia + k, nv)) * nv +
                                      clamp_index(ib + l, nv)) * nv;
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int k = 0; k < np; ++k)
                for (int l = 0; l < np; ++l) {
                    const double w = wa[k] * wb[l];
                    const double* r = rows[k][l];
                    for (int c = 0; c < nv; ++c) acc[c] += w * r[c];
                }
            if (ctx.monotone) {
                const double* c00 = rows[half][half];
                const double* c01 = rows[half][half + 1];
                const double* c10 = rows[half + 1][half];
                const double* c11 = rows[half + 1][half + 1];
                for (int c = 0; c < nv; ++c) {
                    const double mn = std::min(std::min(c00[c], c01[c]), std::min(c10[c], c11[c]));
                    const double mx = std::max(std::max(c00[c], c01[c]), std::max(c10[c], c11[c]));
                    acc[c] = std::clamp(acc[c], mn, mx);
                }
            }
            const double mp = ctx.gauss(X1 * X1 + X2 * X2);
            double* o = out + (static_cast<std::size_t>(a) * nv + b) * nv;
            for (int c = 0; c < nv; ++c) o[c] = mp * ctx.g1[c] * acc[c];
        }
}

/// Shift along v3 by d: out(v) = M(v1, v2, v3 - d) I[G](v1, v2, v3 - d).
void axis3_shift(const double* G, double* out, const VelocityContext& ctx, double d) {
    const int nv = ctx.nv, np = ctx.order + 1, half = (ctx.order - 1) / 2;
    std::vector<std::array<double, kMaxStencil>> w(nv);
    std::vector<int> base(nv);
    std::vector<double> mz(nv);
    for (int c = 0; c < nv; ++c) {
        const double z = ctx.v[c] - d;
        base[c] = lagrange_stencil(ctx.position(z), ctx.order, w[c].data());
        mz[c] = ctx.gauss(z * z);
    }
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
            const std::size_t off = (static_cast<std::size_t>(a) * nv + b) * nv;
            const double mab = ctx.g1[a] * ctx.g1[b];
            for (int c = 0; c < nv; ++c) {
                double s = 0.0;
                for (int k = 0; k < np; ++k) s += w[c][k] * G[off + clamp_index(base[c] + k, nv)];
                if (ctx.monotone) {
                    const double g0 = G[off + clamp_index(base[c] + half, nv)];
                    const double g1 = G[off + clamp_index(base[c] + half + 1, nv)];
                    s = std::clamp(s, std::min(g0, g1), std::max(g0, g1));
                }
                out[off + c] = mab * mz[c] * s;
            }
        }
}

/// Foot point of the exact flow for general (E, B).
struct ExactFlow {
    Vec3 b{0, 0, 1};
    double theta = 0.0;  // rotation angle of the perpendicular part (backward)
    Vec3 wd{0, 0, 0};    // E x B drift
    double par_shift = 0.0;
    Vec3 shift{0, 0, 0}; // used when B vanishes
    bool magnetic = false;

    Vec3 foot(const Vec3& v) const {
        if (!magnetic) return {v[0] - shift[0], v[1] - shift[1], v[2] - shift[2]};
        const double vp = dot(v, b);
        Vec3 w;
        for (int k = 0; k < 3; ++k) w[k] = v[k] - vp * b[k] - wd[k];
        const Vec3 wxb = cross(w, b);
        const double c = std::cos(theta), s = std::sin(theta);
        Vec3 out;
        for (int k = 0; k < 3; ++k) out[k] = (vp - par_shift) * b[k] + c * w[k] - s * wxb[k] + wd[k];
        return out;
    }
};

void general_map(const double* G, double* out, const VelocityContext& ctx, const ExactFlow& fl) {
    const int nv = ctx.nv, np = ctx.order + 1, half = (ctx.order - 1) / 2;
    double w[3][kMaxStencil];
    int idx[3][kMaxStencil];
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
            for (int c = 0; c < nv; ++c) {
                const Vec3 X = fl.foot({ctx.v[a], ctx.v[b], ctx.v[c]});
                for (int d = 0; d < 3; ++d) {
                    const int base = lagrange_stencil(ctx.position(X[d]), ctx.order, w[d]);
                    for (int k = 0; k < np; ++k) idx[d][k] = clamp_index(base + k, nv);
                }
                double s = 0.0;
                for (int i = 0; i < np; ++i)
                    for (int j = 0; j < np; ++j) {
                        const double wij = w[0][i] * w[1][j];
                        const double* row = G + (static_cast<std::size_t>(idx[0][i]) * nv + idx[1][j]) * nv;
                        double t = 0.0;
                        for (int k = 0; k < np; ++k) t += w[2][k] * row[idx[2][k]];
                        s += wij * t;
                    }
                if (ctx.monotone) {
                    double mn = INFINITY, mx = -INFINITY;
                    for (int i = half; i <= half + 1; ++i)
                        for (int j = half; j <= half + 1; ++j)
                            for (int k = half; k <= half + 1; ++k) {
                                const double g = G[(static_cast<std::size_t>(idx[0][i]) * nv + idx[1][j]) * nv + idx[2][k]];
                                mn = std::min(mn, g);
                                mx = std::max(mx, g);
                            }
                    s = std::clamp(s, mn, mx);
                }
                out[(static_cast<std::size_t>(a) * nv + b) * nv + c] = ctx.gauss(dot(X, X)) * s;
            }
}

/// foot(v) = R v + o with R orthogonal.
struct RigidFoot {
    double R[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Vec3 o{0, 0, 0};
};

RigidFoot rigid_from_plane(const PlaneMap& pm, double d3 = 0.0) {
    RigidFoot r;
    r.R[0][0] = pm.r11;
    r.R[0][1] = pm.r12;
    r.R[1][0] = pm.r21;
    r.R[1][1] = pm.r22;
    r.o = {pm.o1, pm.o2, -d3};
    return r;
}

RigidFoot rigid_from_flow(const ExactFlow& fl) {
    RigidFoot r;
    r.o = fl.foot({0, 0, 0});
    for (int k = 0; k < 3; ++k) {
        Vec3 e{0, 0, 0};
        e[k] = 1.0;
        const Vec3 col = fl.foot(e);
        for (int i = 0; i < 3; ++i) r.R[i][k] = col[i] - r.o[i];
    }
    return r;
}

/// Solves the n x n system a x = b in place by Gaussian elimination with partial pivoting.
/// Returns false when a pivot falls below tol times the largest diagonal entry.
bool solve_small(double a[5][5], double b[5], int n, double tol) {
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i][i]));
    if (!(scale > 0.0)) return false;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) <= tol * scale) return false;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(a[c][k], a[piv][k]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            const double m = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= m * a[c][k];
            b[r] -= m * b[c];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        double s = b[c];
        for (int k = c + 1; k < n; ++k) s -= a[c][k] * b[k];
        b[c] = s / a[c][c];
    }
    return true;
}

void restore_mass(const double* before, double* after, std::size_t n) {
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        s0 += before[k];
        s1 += after[k];
    }
    if (s1 != 0.0 && s0 != 0.0) {
        const double r = s0 / s1;
        for (std::size_t k = 0; k < n; ++k) after[k] *= r;
    }
}

/// Mass, first moment and sum |v|^2 f of one velocity block (grid sums, no h^3 factor).
struct BlockMoments {
    double m = 0.0;
    Vec3 j{0, 0, 0};
    double s2 = 0.0;
};

BlockMoments block_moments(const double* f, const VelocityContext& ctx) {
    BlockMoments r;
    const int nv = ctx.nv;
    std::size_t k = 0;
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
            const double va = ctx.v[a], vb = ctx.v[b], vab = va * va + vb * vb;
            double s0 = 0.0, s1 = 0.0, s2 = 0.0;
            for (int c = 0; c < nv; ++c, ++k) {
                const double x = f[k], vc = ctx.v[c];
                s0 += x;
                s1 += vc * x;
                s2 += vc * vc * x;
            }
            r.m += s0;
            r.j[0] += va * s0;
            r.j[1] += vb * s0;
            r.j[2] += s1;
            r.s2 += vab * s0 + s2;
        }
    return r;
}

/// Restores the mass, momentum and energy of the exact push-forward of `before` under the
/// rigid map whose foot is `foot`, falling back to the mass rescale.
void restore_moments(const double* before, double* after, const VelocityContext& ctx,
                     const RigidFoot& foot) {
    const int nv = ctx.nv;
    const std::size_t n = ctx.inv_m.size();
    const BlockMoments m0 = block_moments(before, ctx);
    if (!(m0.m > 0.0)) {
        restore_mass(before, after, n);
        return;
    }
    // push-forward v -> R^T (v - o)
    Vec3 jo;
    for (int i = 0; i < 3; ++i) jo[i] = m0.j[i] - foot.o[i] * m0.m;
    double target[5];
    target[0] = m0.m;
    for (int i = 0; i < 3; ++i)
        target[1 + i] = foot.R[0][i] * jo[0] + foot.R[1][i] * jo[1] + foot.R[2][i] * jo[2];
    target[4] = m0.s2 - 2.0 * dot(foot.o, m0.j) + dot(foot.o, foot.o) * m0.m;

    // Gram matrix of phi = (1, v1, v2, v3, |v|^2) weighted by the interpolated block, built
    // from the power sums S_p = sum_c f v3^p of every (v1, v2) column
    double g[5][5] = {};
    double mu[5] = {};
    std::size_t k = 0;
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
            double S[5] = {};
            for (int c = 0; c < nv; ++c, ++k) {
                const double x = after[k], z = ctx.v[c], z2 = z * z;
                S[0] += x;
                S[1] += x * z;
                S[2] += x * z2;
                S[3] += x * z2 * z;
                S[4] += x * z2 * z2;
            }
            const double va = ctx.v[a], vb = ctx.v[b], r = va * va + vb * vb;
            const double R0 = r * S[0] + S[2];  // sum f |v|^2
            g[0][0] += S[0];
            g[0][1] += va * S[0];
            g[0][2] += vb * S[0];
            g[0][3] += S[1];
            g[0][4] += R0;
            g[1][1] += va * va * S[0];
            g[1][2] += va * vb * S[0];
            g[1][3] += va * S[1];
            g[1][4] += va * R0;
            g[2][2] += vb * vb * S[0];
            g[2][3] += vb * S[1];
            g[2][4] += vb * R0;
            g[3][3] += S[2];
            g[3][4] += r * S[1] + S[3];
            g[4][4] += r * r * S[0] + 2.0 * r * S[2] + S[4];
        }
    for (int i = 0; i < 5; ++i) mu[i] = g[0][i];
    for (int i = 0; i < 5; ++i)
        for (int l = 0; l < i; ++l) g[i][l] = g[l][i];
    double rhs[5];
    for (int i = 0; i < 5; ++i) rhs[i] = target[i] - mu[i];
    if (!solve_small(g, rhs, 5, 1e-13)) {
        restore_mass(before, after, n);
        return;
    }
    const double vm2 = 3.0 * ctx.vmax * ctx.vmax;
    const double bound = std::abs(rhs[0]) + ctx.vmax * (std::abs(rhs[1]) + std::abs(rhs[2]) + std::abs(rhs[3])) +
                         vm2 * std::abs(rhs[4]);
    if (bound >= 1.0) {
        restore_mass(before, after, n);
        return;
    }
    k = 0;
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
            const double base = 1.0 + rhs[0] + rhs[1] * ctx.v[a] + rhs[2] * ctx.v[b] +
                                rhs[4] * (ctx.v[a] * ctx.v[a] + ctx.v[b] * ctx.v[b]);
            for (int c = 0; c < nv; ++c, ++k)
                after[k] *= base + rhs[3] * ctx.v[c] + rhs[4] * ctx.v[c] * ctx.v[c];
        }
}

PlaneMap rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c, 0.0, 0.0};
}

}  // namespace

void KineticOptions::validate() const {
    if (interp_order != 3 && interp_order != 5)
        throw ParameterError("interpolation order must be 3 or 5");
    if (picard_max_iter < 1) throw ParameterError("Picard iteration cap must be >= 1");
    if (!(picard_tol > 0.0)) throw ParameterError("Picard tolerance must be positive");
}

void apply_larmor(DistributionField& f, double dt, const PlasmaParams& params,
                  const KineticOptions& opt) {
    require_same_grid(f.xgrid(), params.grid(), "step_larmor");
    const VelocityContext ctx(f.vgrid(), params.sigma, opt);
    const std::size_t blk = f.block();
    std::vector<double> G(blk), out(blk);
    const double scale = params.q / params.m * dt / (params.eps * params.eps);
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        const double alpha = scale * params.b_ext[ix];
        double* p = f.node(ix);
        ratio(p, ctx, G.data());
        const PlaneMap pm = rotation(alpha);
        plane_map(G.data(), out.data(), ctx, pm);
        if (opt.moment_fix)
            restore_moments(p, out.data(), ctx, rigid_from_plane(pm));
        else
            restore_mass(p, out.data(), blk);
        std::copy(out.begin(), out.end(), p);
    }
}

void apply_acceleration(DistributionField& f, const EMState& em, double dt,
                        const PlasmaParams& params, const KineticOptions& opt) {
    require_same_grid(f.xgrid(), em.E.grid(), "step_acceleration");
    const VelocityContext ctx(f.vgrid(), params.sigma, opt);
    const std::size_t blk = f.block();
    const double kappa = params.q / (params.m * params.eps);
    const double h = f.vgrid().h();
    std::vector<double> G(blk), out(blk), tmp(blk);
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        const Vec3 E{em.E[0][ix], em.E[1][ix], em.E[2][ix]};
        const Vec3 B{em.B[0][ix], em.B[1][ix], em.B[2][ix]};
        if (dot(E, E) == 0.0 && dot(B, B) == 0.0) continue;
        double* p = f.node(ix);
        ratio(p, ctx, G.data());
        RigidFoot foot;
        const double bperp = std::hypot(B[0], B[1]);
        if (bperp * kappa * dt <= 1e-13) {
            // B along e3: an affine map of the (v1, v2) plane, then a shift in v3.
            const double theta = kappa * B[2] * dt;
            PlaneMap pm = rotation(theta);
            if (std::abs(theta) <= 1e-12) {
                pm.o1 = -kappa * E[0] * dt;
                pm.o2 = -kappa * E[1] * dt;
            } else {
                const double wd1 = E[1] / B[2], wd2 = -E[0] / B[2];
                pm.o1 = wd1 - (pm.r11 * wd1 + pm.r12 * wd2);
                pm.o2 = wd2 - (pm.r21 * wd1 + pm.r22 * wd2);
            }
            const double d3 = kappa * E[2] * dt;
            foot = rigid_from_plane(pm, d3);
            if (std::abs(d3) <= 1e-13 * h) {
                plane_map(G.data(), out.data(), ctx, pm);
            } else {
                plane_map(G.data(), tmp.data(), ctx, pm);
                ratio(tmp.data(), ctx, G.data());
                axis3_shift(G.data(), out.data(), ctx, d3);
            }
        } else {
            ExactFlow fl;
            const double bn = std::sqrt(dot(B, B));
            fl.magnetic = true;
            for (int k = 0; k < 3; ++k) fl.b[k] = B[k] / bn;
            fl.theta = kappa * bn * dt;
            const Vec3 exb = cross(E, B);
            for (int k = 0; k < 3; ++k) fl.wd[k] = exb[k] / (bn * bn);
            fl.par_shift = kappa * dot(E, fl.b) * dt;
            general_map(G.data(), out.data(), ctx, fl);
            foot = rigid_from_flow(fl);
        }
        if (opt.moment_fix)
            restore_moments(p, out.data(), ctx, foot);
        else
            restore_mass(p, out.data(), blk);
        std::copy(out.begin(), out.end(), p);
    }
}

DistributionField step_larmor(const DistributionField& f, double dt, const PlasmaParams& params,
                              const KineticOptions& opt) {
    DistributionField out = f;
    apply_larmor(out, dt, params, opt);
    out.set_time(f.time());
    return out;
}

DistributionField step_acceleration(const DistributionField& f, const EMState& em, double dt,
                                    const PlasmaParams& params, const KineticOptions& opt) {
    DistributionField out = f;
    apply_acceleration(out, em, dt, params, opt);
    return out;
}

}  // namespace vmfp
