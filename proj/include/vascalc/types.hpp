#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vascalc/errors.hpp"

namespace vascalc {

/// Voxel grid extents. Samples are stored x-fastest, then y, then z;
/// slice index k walks transverse slices in scan order (superior to inferior).
struct Dims {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    [[nodiscard]] std::size_t total() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    [[nodiscard]] std::size_t slice_size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    [[nodiscard]] bool contains(int x, int y, int z) const {
        return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
    }
    [[nodiscard]] std::size_t index(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * static_cast<std::size_t>(ny) +
                static_cast<std::size_t>(y)) *
                   static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(x);
    }
    bool operator==(const Dims&) const = default;
};

/// Physical voxel edge lengths in millimeters. The product sx*sy*sz is the
/// voxel-count-to-mm3 conversion factor used by all volume reports.
struct VoxelSpacing {
    double sx = 1.0;
    double sy = 1.0;
    double sz = 1.0;

    [[nodiscard]] double voxel_volume_mm3() const { return sx * sy * sz; }
    [[nodiscard]] double pixel_area_mm2() const { return sx * sy; }
    bool operator==(const VoxelSpacing&) const = default;
};

/// 3-D grid of signed Hounsfield-unit samples. Metal artifacts may exceed the
/// nominal [-1024, 3071] HU range; anything representable in 16 bits is legal.
struct CtVolume {
    Dims dims;
    VoxelSpacing spacing;
    std::vector<std::int16_t> voxels;

    [[nodiscard]] std::int16_t at(int x, int y, int z) const {
        return voxels[dims.index(x, y, z)];
    }
};

/// 8-bit windowed rendition of a CtVolume. Records the window that produced
/// it, because a byte threshold is meaningless without the window.
struct ByteVolume {
    Dims dims;
    VoxelSpacing spacing;
    std::vector<std::uint8_t> bytes;
    double window_level = 0.0;
    double window_width = 0.0;

    [[nodiscard]] std::uint8_t at(int x, int y, int z) const {
        return bytes[dims.index(x, y, z)];
    }
};

/// Binary voxel labels congruent with some volume; 1 marks membership.
struct MaskVolume {
    Dims dims;
    VoxelSpacing spacing;
    std::vector<std::uint8_t> bits;

    [[nodiscard]] bool at(int x, int y, int z) const {
        return bits[dims.index(x, y, z)] != 0;
    }
    [[nodiscard]] std::uint64_t count() const;
};

/// Inclusive transverse slice interval [start_slice, end_slice].
struct SliceRange {
    int start_slice = 0;
    int end_slice = 0;

    [[nodiscard]] int slice_count() const { return end_slice - start_slice + 1; }
    bool operator==(const SliceRange&) const = default;
};

/// Integer voxel coordinate (seed points, probes).
struct Voxel {
    int x = 0;
    int y = 0;
    int z = 0;
    bool operator==(const Voxel&) const = default;
};

void check_dims(const Dims& d);
void check_spacing(const VoxelSpacing& s);
void check_volume(const CtVolume& v);
void check_mask(const MaskVolume& m);
void check_slice_range(const SliceRange& r, const Dims& d);

/// Throws DimsMismatchError unless a == b.
void require_same_dims(const Dims& a, const Dims& b, const char* what);

}  // namespace vascalc
