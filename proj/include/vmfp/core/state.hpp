#pragma once

#include <cstddef>
#include <vector>

#include "vmfp/core/field.hpp"
#include "vmfp/core/grid.hpp"

namespace vmfp {

/// Phase-space density f(x1, x2, v1, v2, v3), stored nodewise with the spatial
/// index outermost: values[(i1*n2 + i2) * nv^3 + (a*nv + b)*nv + c].
class DistributionField {
public:
    DistributionField() = default;
    DistributionField(const PerpGrid& xg, const VelGrid& vg, double t = 0.0)
        : xgrid_(xg), vgrid_(vg), values_(xg.size() * vg.size(), 0.0), t_(t) {}

    const PerpGrid& xgrid() const { return xgrid_; }
    const VelGrid& vgrid() const { return vgrid_; }
    double time() const { return t_; }
    void set_time(double t) { t_ = t; }

    std::size_t size() const { return values_.size(); }
    std::size_t block() const { return vgrid_.size(); }
    double* node(std::size_t ix) { return values_.data() + ix * vgrid_.size(); }
    const double* node(std::size_t ix) const { return values_.data() + ix * vgrid_.size(); }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double phase_volume() const { return xgrid_.cell_area() * vgrid_.cell_volume(); }
    double mass() const;
    double min() const;

    /// Fraction of the mass carried by the outermost velocity shell.
    double boundary_mass_fraction() const;
    /// Throws PositivityError on a negative or non-finite entry or on zero mass.
    /// Logs a warning when the velocity boundary shell carries more than 1e-6 of the mass.
    void check_invariants() const;

private:
    PerpGrid xgrid_;
    VelGrid vgrid_;
    std::vector<double> values_;
    double t_ = 0.0;
};

/// L1 distance sum |f - g| dx dv.
double l1_distance(const DistributionField& f, const DistributionField& g);

struct EMState {
    VectorField E;
    VectorField B;
    double t = 0.0;

    EMState() = default;
    explicit EMState(const PerpGrid& grid, double time = 0.0) : E(grid), B(grid), t(time) {}
};

struct LimitState {
    ScalarField n;
    VectorField E;
    ScalarField b1;
    double t = 0.0;

    LimitState() = default;
    explicit LimitState(const PerpGrid& grid, double time = 0.0)
        : n(grid), E(grid), b1(grid), t(time) {}
};

}  // namespace vmfp
