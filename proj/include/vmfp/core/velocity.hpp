#pragma once

#include <array>
#include <vector>

#include "vmfp/core/grid.hpp"

namespace vmfp {

using Vec3 = std::array<double, 3>;

/// exp(-|v|^2 / (2 sigma)) / (2 pi sigma)^{3/2}
double maxwellian(const Vec3& v, double sigma);

/// Maxwellian sampled at every node of vg, in the layout of a velocity block.
std::vector<double> sampled_maxwellian(const VelGrid& vg, double sigma);

/// Sampled Maxwellian rescaled so that its midpoint quadrature is exactly 1.
std::vector<double> grid_maxwellian(const VelGrid& vg, double sigma);

/// R(theta, b) v = cos(theta) (I - b b) v - sin(theta) v x b + (v.b) b.
Vec3 rotate_velocity(const Vec3& v, double theta, const Vec3& b);

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace vmfp
