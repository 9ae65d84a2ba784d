#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "vascalc/types.hpp"

namespace vascalc {

/// Seeded intensity-band growth parameters. Seeds play the role of the
/// operator's marker bubbles; the [lower_hu, upper_hu] band is the
/// intensity-similarity criterion that stops growth at vessel edges.
struct RegionGrowParams {
    std::vector<Voxel> seeds;
    std::int16_t lower_hu = 0;
    std::int16_t upper_hu = 0;
    /// 6 = face-adjacent (default; resists leaking into bone through
    /// diagonal contact), 26 = full 3x3x3 neighborhood.
    int connectivity = 6;
    /// Growth cap in voxels; defaults to "no cap" (clamped to the volume).
    std::size_t max_voxels = std::numeric_limits<std::size_t>::max();
};

struct RegionGrowResult {
    MaskVolume mask;
    std::uint64_t grown_count = 0;
    /// True when every seed's intensity fell outside the band: the mask is
    /// empty and callers must surface this, never report a silent success.
    bool no_seed_in_band = false;
    /// True when growth stopped at max_voxels rather than at the band edge.
    bool truncated = false;
};

/// Grows the set of voxels reachable from any in-band seed through
/// connectivity-adjacent in-band voxels. Growth is breadth-first; when
/// max_voxels cuts a level short, voxels within that level are admitted in
/// ascending linear-index order. Frontier expansion runs across threads but
/// the result is identical to the sequential one for any thread count.
///
/// Throws InvalidArgumentError for an empty seed list, an out-of-bounds
/// seed, lower_hu > upper_hu, connectivity not in {6, 26}, or max_voxels
/// of zero.
RegionGrowResult region_grow(const CtVolume& vol, const RegionGrowParams& params);

}  // namespace vascalc
