#include "vascalc/types.hpp"

#include <cmath>
#include <string>

namespace vascalc {

std::uint64_t MaskVolume::count() const {
    std::uint64_t n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
}

void check_dims(const Dims& d) {
    if (d.nx < 1 || d.ny < 1 || d.nz < 1) {
        throw InvalidArgumentError("dims must all be >= 1, got [" + std::to_string(d.nx) +
                                   "," + std::to_string(d.ny) + "," + std::to_string(d.nz) +
                                   "]");
    }
}

void check_spacing(const VoxelSpacing& s) {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(s.sx) || !ok(s.sy) || !ok(s.sz)) {
        throw InvalidArgumentError("voxel spacing components must be strictly positive and finite");
    }
}

void check_volume(const CtVolume& v) {
    check_dims(v.dims);
    check_spacing(v.spacing);
    if (v.voxels.size() != v.dims.total()) {
        throw InvalidArgumentError("voxel count " + std::to_string(v.voxels.size()) +
                                   " does not equal nx*ny*nz = " + std::to_string(v.dims.total()));
    }
}

void check_mask(const MaskVolume& m) {
    check_dims(m.dims);
    check_spacing(m.spacing);
    if (m.bits.size() != m.dims.total()) {
        throw InvalidArgumentError("mask sample count " + std::to_string(m.bits.size()) +
                                   " does not equal nx*ny*nz = " + std::to_string(m.dims.total()));
    }
    for (std::uint8_t b : m.bits) {
        if (b > 1) {
            throw MaskValueError("mask sample value " + std::to_string(int(b)) +
                                 " is neither 0 nor 1");
        }
    }
}

void check_slice_range(const SliceRange& r, const Dims& d) {
    if (r.start_slice < 0 || r.start_slice > r.end_slice || r.end_slice >= d.nz) {
        throw InvalidArgumentError("slice range [" + std::to_string(r.start_slice) + "," +
                                   std::to_string(r.end_slice) +
                                   "] invalid for nz = " + std::to_string(d.nz));
    }
}

void require_same_dims(const Dims& a, const Dims& b, const char* what) {
    if (!(a == b)) {
        throw DimsMismatchError(std::string(what) + ": dims [" + std::to_string(a.nx) + "," +
                                std::to_string(a.ny) + "," + std::to_string(a.nz) +
                                "] vs [" + std::to_string(b.nx) + "," + std::to_string(b.ny) +
                                "," + std::to_string(b.nz) + "]");
    }
}

}  // namespace vascalc
