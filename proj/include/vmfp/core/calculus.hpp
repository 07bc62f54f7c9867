#pragma once

#include "vmfp/core/field.hpp"

namespace vmfp {

/// Spectral is the default everywhere; the periodic central-difference schemes are used
/// where an identity must be checked at a finite order.
enum class DiffScheme { Spectral, Central2, Central4 };

ScalarField partial(const ScalarField& s, int axis, DiffScheme scheme = DiffScheme::Spectral);

/// (d1 s, d2 s, 0)
VectorField gradient(const ScalarField& s, DiffScheme scheme = DiffScheme::Spectral);
/// d1 V1 + d2 V2
ScalarField divergence(const VectorField& v, DiffScheme scheme = DiffScheme::Spectral);
/// (d2 V3, -d1 V3, d1 V2 - d2 V1)
VectorField curl(const VectorField& v, DiffScheme scheme = DiffScheme::Spectral);
/// d1 V2 - d2 V1
ScalarField curl_z(const VectorField& v, DiffScheme scheme = DiffScheme::Spectral);

}  // namespace vmfp
