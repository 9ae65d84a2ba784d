#pragma once

#include <filesystem>

#include "vascalc/types.hpp"

namespace vascalc {

// CTV on-disk format: a text header plus an adjacent raw payload.
//
//   magic=CTV1
//   dims=[nx,ny,nz]
//   spacing_mm=[sx,sy,sz]
//   dtype=i16            (volumes)   |  dtype=u8  (masks, samples in {0,1})
//   order=x-fastest
//   endian=little
//   payload=<relative path to the raw sample array>
//
// The payload holds exactly nx*ny*nz little-endian samples. Saving writes
// the payload next to the header, named after the header with a .raw
// extension; both files go through a temp-file + rename so a failed save
// leaves no partial output behind.

/// Loads an i16 CTV volume. Distinct errors: IoError (missing file),
/// HeaderError (malformed header), DtypeError (dtype is not i16),
/// PayloadSizeError (payload length disagrees with dims).
CtVolume load_volume(const std::filesystem::path& header_path);

/// Saves a volume as header + raw payload. Throws IoError if the
/// destination is unwritable.
void save_volume(const CtVolume& vol, const std::filesystem::path& header_path);

/// Loads a u8 CTV mask; additionally raises MaskValueError if any sample
/// is neither 0 nor 1.
MaskVolume load_mask(const std::filesystem::path& header_path);

void save_mask(const MaskVolume& mask, const std::filesystem::path& header_path);

}  // namespace vascalc
