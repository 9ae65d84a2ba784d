#pragma once

#include <filesystem>

#include "vascalc/types.hpp"

namespace vascalc {

/// Loads an externally produced CTV u8 mask (e.g. a segmentation model's
/// prediction) and verifies it matches the dims of the volume it will be
/// applied to. Throws DimsMismatchError when it does not.
MaskVolume import_mask(const std::filesystem::path& header_path, const Dims& expected_dims);

/// Keeps bytes where the mask is 1, zeroes everything else. The window
/// record is carried through unchanged.
ByteVolume apply_mask(const ByteVolume& bv, const MaskVolume& mask);

}  // namespace vascalc
