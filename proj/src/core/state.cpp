#include "vmfp/core/state.hpp"

#include <cmath>
#include <spdlog/spdlog.h>

#include "vmfp/core/errors.hpp"

namespace vmfp {

double DistributionField::mass() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * phase_volume();
}

double DistributionField::min() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = v < m ? v : m;
    return m;
}

double DistributionField::boundary_mass_fraction() const {
    const int nv = vgrid_.nv();
    double shell = 0.0, total = 0.0;
    for (std::size_t ix = 0; ix < xgrid_.size(); ++ix) {
        const double* blk = node(ix);
        for (int a = 0; a < nv; ++a)
            for (int b = 0; b < nv; ++b)
                for (int c = 0; c < nv; ++c) {
                    double v = blk[vgrid_.index(a, b, c)];
                    total += v;
                    if (a == 0 || b == 0 || c == 0 || a == nv - 1 || b == nv - 1 || c == nv - 1)
                        shell += v;
                }
    }
    return total > 0.0 ? shell / total : 0.0;
}

void DistributionField::check_invariants() const {
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw PositivityError("DistributionField: negative or non-finite value");
    if (!(mass() > 0.0)) throw PositivityError("DistributionField: total mass must be positive");
    double frac = boundary_mass_fraction();
    if (frac > 1e-6)
        spdlog::warn("velocity boundary shell carries {:.3e} of the mass; increase vmax", frac);
}

double l1_distance(const DistributionField& f, const DistributionField& g) {
    require_same_grid(f.xgrid(), g.xgrid(), "l1_distance");
    if (!(f.vgrid() == g.vgrid())) throw ShapeError("l1_distance: velocity grids differ");
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += std::abs(f[k] - g[k]);
    return s * f.phase_volume();
}

}  // namespace vmfp
