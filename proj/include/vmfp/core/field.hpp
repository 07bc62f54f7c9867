#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vmfp/core/grid.hpp"

namespace vmfp {

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const PerpGrid& grid, double value = 0.0)
        : grid_(grid), data_(grid.size(), value) {}

    template <class F>
    static ScalarField from_function(const PerpGrid& grid, F&& fn) {
        ScalarField s(grid);
        for (int i = 0; i < grid.n1(); ++i)
            for (int j = 0; j < grid.n2(); ++j)
                s.data_[grid.index(i, j)] = fn(grid.x1(i), grid.x2(j));
        return s;
    }

    const PerpGrid& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t k) { return data_[k]; }
    double operator[](std::size_t k) const { return data_[k]; }
    double& at(int i1, int i2) { return data_[grid_.index(i1, i2)]; }
    double at(int i1, int i2) const { return data_[grid_.index(i1, i2)]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double sum() const;
    double integral() const { return sum() * grid_.cell_area(); }
    double mean() const { return sum() / static_cast<double>(data_.size()); }
    double min() const;
    double max() const;
    /// sqrt(sum |s|^2 * cell area)
    double l2_norm() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);

private:
    PerpGrid grid_;
    std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField b);

/// Three components sampled on a PerpGrid; nothing depends on x3.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const PerpGrid& grid)
        : c_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}
    VectorField(ScalarField a, ScalarField b, ScalarField c);

    const PerpGrid& grid() const { return c_[0].grid(); }
    ScalarField& operator[](int k) { return c_[k]; }
    const ScalarField& operator[](int k) const { return c_[k]; }

    double l2_norm() const;
    /// sum over nodes of |V|^2 times cell area
    double squared_integral() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double a);

private:
    std::array<ScalarField, 3> c_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double a, VectorField b);

/// Throws ShapeError unless both grids are identical.
void require_same_grid(const PerpGrid& a, const PerpGrid& b, const char* where);

}  // namespace vmfp
