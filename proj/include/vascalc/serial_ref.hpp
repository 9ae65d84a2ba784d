#pragma once

#include "vascalc/calcium.hpp"
#include "vascalc/metrics.hpp"
#include "vascalc/phantom.hpp"
#include "vascalc/region_grow.hpp"
#include "vascalc/window.hpp"

// Single-threaded reference implementations of the parallel kernels. They
// favor directness over speed: tests require them to agree with the
// parallel versions bit for bit, and the bench target reports the spread.
namespace vascalc::serial {

AutoWindowResult auto_window(const CtVolume& vol);
ByteVolume window_to_byte(const CtVolume& vol, const Window& window);
ByteVolume apply_mask(const ByteVolume& bv, const MaskVolume& mask);
MaskVolume threshold_calcium(const ByteVolume& masked,
                             std::uint8_t threshold = kDefaultCalciumThreshold);
MaskVolume filter_components_min_area(const MaskVolume& calc, double min_area_mm2,
                                      int connectivity_2d = 8);
CalcificationReport score(const MaskVolume& calc, const VoxelSpacing& spacing,
                          const SliceRange& range, const ScoreProvenance& provenance);
ConfusionCounts confusion(const MaskVolume& pred, const MaskVolume& truth);
double per_slice_dice_mean(const MaskVolume& pred, const MaskVolume& truth);
RegionGrowResult region_grow(const CtVolume& vol, const RegionGrowParams& params);
PhantomOutput generate_phantom(const PhantomSpec& spec);

}  // namespace vascalc::serial
