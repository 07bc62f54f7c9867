#include "vmfp/core/velocity.hpp"

#include <cmath>
#include <numbers>

#include "vmfp/core/errors.hpp"

namespace vmfp {

double maxwellian(const Vec3& v, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("maxwellian: sigma must be positive");
    const double r2 = dot(v, v);
    return std::exp(-r2 / (2.0 * sigma)) / std::pow(2.0 * std::numbers::pi * sigma, 1.5);
}

std::vector<double> sampled_maxwellian(const VelGrid& vg, double sigma) {
    const int nv = vg.nv();
    std::vector<double> m(vg.size());
    for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
            for (int c = 0; c < nv; ++c)
                m[vg.index(a, b, c)] = maxwellian({vg.node(a), vg.node(b), vg.node(c)}, sigma);
    return m;
}

std::vector<double> grid_maxwellian(const VelGrid& vg, double sigma) {
    auto m = sampled_maxwellian(vg, sigma);
    double s = 0.0;
    for (double x : m) s += x;
    const double scale = 1.0 / (s * vg.cell_volume());
    for (double& x : m) x *= scale;
    return m;
}

Vec3 rotate_velocity(const Vec3& v, double theta, const Vec3& b) {
    if (std::abs(std::sqrt(dot(b, b)) - 1.0) > 1e-12)
        throw ParameterError("rotate_velocity: axis must be a unit vector");
    const double vb = dot(v, b);
    const Vec3 vxb = cross(v, b);
    const double c = std::cos(theta), s = std::sin(theta);
    Vec3 out;
    for (int k = 0; k < 3; ++k) out[k] = c * (v[k] - vb * b[k]) - s * vxb[k] + vb * b[k];
    return out;
}

}  // namespace vmfp
