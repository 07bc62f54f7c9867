#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vmfp {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured quantity
    double threshold = 0.0;  ///< bound it is compared against
};

/// Fast structural invariants on small grids with randomized inputs drawn from seed:
/// norm-preserving rotation, conservation and positivity of a kinetic step, div B,
/// Gauss projection, equilibrium fixed point, Csiszar-Kullback, limit mass.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace vmfp
