#pragma once

#include <cstddef>

namespace vmfp {

/// Periodic square torus [0, L)^2 with n1 x n2 cells; node (i1, i2) sits at (i1*h1, i2*h2).
/// Flat index is i1 * n2 + i2 (x1 outermost).
class PerpGrid {
public:
    PerpGrid() = default;
    PerpGrid(double length, int n1, int n2);

    double length() const { return length_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    double h1() const { return length_ / n1_; }
    double h2() const { return length_ / n2_; }
    double cell_area() const { return h1() * h2(); }
    double min_spacing() const { return h1() < h2() ? h1() : h2(); }
    std::size_t size() const { return static_cast<std::size_t>(n1_) * n2_; }
    bool periodic() const { return true; }

    double x1(int i1) const { return i1 * h1(); }
    double x2(int i2) const { return i2 * h2(); }
    std::size_t index(int i1, int i2) const {
        return static_cast<std::size_t>(i1) * n2_ + i2;
    }

    bool operator==(const PerpGrid& o) const {
        return length_ == o.length_ && n1_ == o.n1_ && n2_ == o.n2_;
    }

private:
    double length_ = 0.0;
    int n1_ = 0;
    int n2_ = 0;
};

/// Cell-centred velocity grid on [-vmax, vmax]^3 with nv points per axis.
/// Nodes are h*(i + 1/2 - nv/2), so v and -v are both nodes, bit for bit.
class VelGrid {
public:
    VelGrid() = default;
    VelGrid(double vmax, int nv);

    double vmax() const { return vmax_; }
    int nv() const { return nv_; }
    double h() const { return 2.0 * vmax_ / nv_; }
    double cell_volume() const { double s = h(); return s * s * s; }
    std::size_t size() const { return static_cast<std::size_t>(nv_) * nv_ * nv_; }
    double node(int i) const { return h() * (i + 0.5 - 0.5 * nv_); }
    std::size_t index(int a, int b, int c) const {
        return (static_cast<std::size_t>(a) * nv_ + b) * nv_ + c;
    }

    bool operator==(const VelGrid& o) const { return vmax_ == o.vmax_ && nv_ == o.nv_; }

private:
    double vmax_ = 0.0;
    int nv_ = 0;
};

}  // namespace vmfp
