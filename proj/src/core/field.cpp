#include "vmfp/core/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vmfp/core/errors.hpp"

namespace vmfp {

void require_same_grid(const PerpGrid& a, const PerpGrid& b, const char* where) {
    if (!(a == b)) throw ShapeError(std::string(where) + ": fields live on different grids");
}

double ScalarField::sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

double ScalarField::l2_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s * grid_.cell_area());
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "ScalarField +=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "ScalarField -=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField b) { return b *= a; }

VectorField::VectorField(ScalarField a, ScalarField b, ScalarField c)
    : c_{std::move(a), std::move(b), std::move(c)} {
    require_same_grid(c_[0].grid(), c_[1].grid(), "VectorField");
    require_same_grid(c_[0].grid(), c_[2].grid(), "VectorField");
}

double VectorField::squared_integral() const {
    double s = 0.0;
    for (const auto& comp : c_)
        for (double v : comp.values()) s += v * v;
    return s * grid().cell_area();
}

double VectorField::l2_norm() const { return std::sqrt(squared_integral()); }

VectorField& VectorField::operator+=(const VectorField& o) {
    for (int k = 0; k < 3; ++k) c_[k] += o.c_[k];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    for (int k = 0; k < 3; ++k) c_[k] -= o.c_[k];
    return *this;
}

VectorField& VectorField::operator*=(double a) {
    for (auto& comp : c_) comp *= a;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double a, VectorField b) { return b *= a; }

}  // namespace vmfp
