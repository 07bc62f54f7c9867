#include "vmfp/core/moments.hpp"

#include <vector>

namespace vmfp {

namespace {

std::vector<double> nodes(const VelGrid& vg) {
    std::vector<double> v(vg.nv());
    for (int i = 0; i < vg.nv(); ++i) v[i] = vg.node(i);
    return v;
}

}  // namespace

Moments moments(const DistributionField& f) {
    const PerpGrid& xg = f.xgrid();
    const VelGrid& vg = f.vgrid();
    const int nv = vg.nv();
    const double dv = vg.cell_volume();
    const auto v = nodes(vg);

    Moments mo;
    mo.n = ScalarField(xg);
    mo.j = VectorField(xg);
    mo.energy = ScalarField(xg);
    for (auto& row : mo.stress)
        for (auto& s : row) s = ScalarField(xg);

    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const double* blk = f.node(ix);
        double n = 0, j[3] = {0, 0, 0}, p[3][3] = {};
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b)
                for (int c = 0; c < nv; ++c) {
                    const double w = blk[vg.index(a, b, c)];
                    const double u[3] = {v[a], v[b], v[c]};
                    n += w;
                    for (int r = 0; r < 3; ++r) {
                        j[r] += u[r] * w;
                        for (int s = r; s < 3; ++s) p[r][s] += u[r] * u[s] * w;
                    }
                }
        mo.n[ix] = n * dv;
        for (int r = 0; r < 3; ++r) {
            mo.j[r][ix] = j[r] * dv;
            for (int s = r; s < 3; ++s) {
                mo.stress[r][s][ix] = p[r][s] * dv;
                mo.stress[s][r][ix] = p[r][s] * dv;
            }
        }
        mo.energy[ix] = 0.5 * (p[0][0] + p[1][1] + p[2][2]) * dv;
    }
    return mo;
}

ScalarField density(const DistributionField& f) {
    const PerpGrid& xg = f.xgrid();
    const std::size_t blk = f.block();
    const double dv = f.vgrid().cell_volume();
    ScalarField n(xg);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const double* p = f.node(ix);
        double s = 0.0;
        for (std::size_t k = 0; k < blk; ++k) s += p[k];
        n[ix] = s * dv;
    }
    return n;
}

VectorField current(const DistributionField& f) {
    const PerpGrid& xg = f.xgrid();
    const VelGrid& vg = f.vgrid();
    const int nv = vg.nv();
    const double dv = vg.cell_volume();
    const auto v = nodes(vg);
    VectorField j(xg);
    std::vector<double> s1(nv), s2(nv), s3(nv);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const double* p = f.node(ix);
        // marginal sums along each axis, then one dot product per component
        std::fill(s1.begin(), s1.end(), 0.0);
        std::fill(s2.begin(), s2.end(), 0.0);
        std::fill(s3.begin(), s3.end(), 0.0);
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b) {
                const double* line = p + vg.index(a, b, 0);
                double row = 0.0;
                for (int c = 0; c < nv; ++c) {
                    row += line[c];
                    s3[c] += line[c];
                }
                s1[a] += row;
                s2[b] += row;
            }
        double j1 = 0, j2 = 0, j3 = 0;
        for (int i = 0; i < nv; ++i) {
            j1 += v[i] * s1[i];
            j2 += v[i] * s2[i];
            j3 += v[i] * s3[i];
        }
        j[0][ix] = j1 * dv;
        j[1][ix] = j2 * dv;
        j[2][ix] = j3 * dv;
    }
    return j;
}

double kinetic_energy(const DistributionField& f) {
    const VelGrid& vg = f.vgrid();
    const int nv = vg.nv();
    std::vector<double> w(vg.size());
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
            for (int c = 0; c < nv; ++c) {
                const double x = vg.node(a), y = vg.node(b), z = vg.node(c);
                w[vg.index(a, b, c)] = 0.5 * (x * x + y * y + z * z);
            }
    double s = 0.0;
    for (std::size_t ix = 0; ix < f.xgrid().size(); ++ix) {
        const double* p = f.node(ix);
        for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * p[k];
    }
    return s * f.phase_volume();
}

}  // namespace vmfp
