#include "vmfp/core/grid.hpp"

#include <string>

#include "vmfp/core/errors.hpp"

namespace vmfp {

PerpGrid::PerpGrid(double length, int n1, int n2) : length_(length), n1_(n1), n2_(n2) {
    if (!(length > 0.0)) throw ParameterError("PerpGrid: length must be positive");
    if (n1 < 4 || n2 < 4 || n1 % 2 || n2 % 2)
        throw ParameterError("PerpGrid: n1, n2 must be even and >= 4, got " +
                             std::to_string(n1) + "x" + std::to_string(n2));
}

VelGrid::VelGrid(double vmax, int nv) : vmax_(vmax), nv_(nv) {
    if (!(vmax > 0.0)) throw ParameterError("VelGrid: vmax must be positive");
    if (nv < 8) throw ParameterError("VelGrid: nv must be >= 8, got " + std::to_string(nv));
}

}  // namespace vmfp
