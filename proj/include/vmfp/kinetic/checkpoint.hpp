#pragma once

#include <filesystem>

#include "vmfp/core/params.hpp"
#include "vmfp/core/state.hpp"

namespace vmfp {

/// Checkpoints are a directory holding checkpoint.bin (raw little-endian float64 arrays,
/// back to back) and checkpoint.json (grid sizes, parameters, time, layout tag and the
/// byte offset of every array).
inline constexpr const char* kCheckpointLayout = "vmfp/nodewise-x1-x2-v1-v2-v3/f64le/v1";

struct KineticCheckpoint {
    PlasmaParams params;
    DistributionField f;
    EMState em;
};

struct LimitCheckpoint {
    PlasmaParams params;
    LimitState state;
};

void save_checkpoint(const std::filesystem::path& dir, const DistributionField& f,
                     const EMState& em, const PlasmaParams& params);
void save_checkpoint(const std::filesystem::path& dir, const LimitState& state,
                     const PlasmaParams& params);

/// "kinetic" or "limit"
std::string checkpoint_kind(const std::filesystem::path& dir);
KineticCheckpoint load_kinetic_checkpoint(const std::filesystem::path& dir);
LimitCheckpoint load_limit_checkpoint(const std::filesystem::path& dir);

}  // namespace vmfp
