#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vascalc/types.hpp"
#include "vascalc/window.hpp"

namespace vascalc {

/// Byte threshold separating calcification from contrasted blood on the
/// 8-bit windowed scale.
inline constexpr std::uint8_t kDefaultCalciumThreshold = 145;

/// Per-slice and total calcified voxel counts and volumes over a slice
/// range, together with every parameter that produced them.
struct CalcificationReport {
    int threshold_used = kDefaultCalciumThreshold;
    double window_level = 0.0;
    double window_width = 0.0;
    SliceRange slice_range;
    std::vector<std::uint64_t> per_slice_counts;
    std::vector<double> per_slice_volumes_mm3;
    std::uint64_t total_count = 0;
    double total_volume_mm3 = 0.0;
    double voxel_volume_mm3 = 0.0;
    /// Minimum in-plane component area enforced before counting, if any.
    std::optional<double> min_area_filter_mm2;
};

/// Marks voxels whose byte value strictly exceeds the threshold. Strictness
/// matters: a byte of exactly 145 is NOT calcification at threshold 145.
MaskVolume threshold_calcium(const ByteVolume& masked,
                             std::uint8_t threshold = kDefaultCalciumThreshold);

/// Drops, slice by slice, every 2-D connected component whose in-plane area
/// (pixel count * sx * sy) is below min_area_mm2. Surviving components pass
/// through untouched. connectivity_2d is 4 or 8 (default 8, the slice-wise
/// convention for the 1 mm^2 minimum-lesion rule).
MaskVolume filter_components_min_area(const MaskVolume& calc, double min_area_mm2,
                                      int connectivity_2d = 8);

/// Provenance carried into a report by score().
struct ScoreProvenance {
    int threshold_used = kDefaultCalciumThreshold;
    double window_level = 0.0;
    double window_width = 0.0;
    std::optional<double> min_area_filter_mm2;
};

/// Counts set voxels per transverse slice over the range (voxels outside it
/// are ignored) and converts counts to mm^3 via the spacing product.
CalcificationReport score(const MaskVolume& calc, const VoxelSpacing& spacing,
                          const SliceRange& range, const ScoreProvenance& provenance);

struct PipelineParams {
    /// Explicit window, or nullopt for min-max auto-windowing.
    std::optional<Window> window;
    std::uint8_t threshold = kDefaultCalciumThreshold;
    /// When set, the minimum-area component filter runs before scoring.
    std::optional<double> min_area_mm2;
    int component_connectivity = 8;
    SliceRange range;
};

/// Full scoring pipeline: window_to_byte -> apply_mask -> threshold_calcium
/// -> (optional filter_components_min_area) -> score. Identical by
/// construction to calling the stages separately; the report records the
/// resolved window, threshold, and filter.
CalcificationReport run_pipeline(const CtVolume& vol, const MaskVolume& vessel_mask,
                                 const PipelineParams& params);

}  // namespace vascalc
