#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <system_error>

#include "vascalc/phantom.hpp"
#include "vascalc/types.hpp"

namespace testutil {

// Scratch directory unique to one test case, removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("vascalc_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline vascalc::CtVolume random_volume(std::mt19937& rng, const vascalc::Dims& dims,
                                       const vascalc::VoxelSpacing& spacing = {1.0, 1.0, 1.0}) {
    vascalc::CtVolume vol{dims, spacing, {}};
    vol.voxels.resize(dims.total());
    std::uniform_int_distribution<int> dist(-1024, 3071);
    for (auto& v : vol.voxels) v = static_cast<std::int16_t>(dist(rng));
    return vol;
}

inline vascalc::MaskVolume random_mask(std::mt19937& rng, const vascalc::Dims& dims,
                                       double fill = 0.3,
                                       const vascalc::VoxelSpacing& spacing = {1.0, 1.0, 1.0}) {
    vascalc::MaskVolume mask{dims, spacing, {}};
    mask.bits.resize(dims.total());
    std::bernoulli_distribution dist(fill);
    for (auto& b : mask.bits) b = dist(rng) ? 1 : 0;
    return mask;
}

// 40x40x30 tube along z at 0.5x0.5x1.0 mm: lumen 300 HU, background 40 HU.
// The radius is chosen so no voxel center lands exactly on the boundary.
inline vascalc::PhantomSpec tube_spec() {
    vascalc::PhantomSpec spec;
    spec.dims = {40, 40, 30};
    spec.spacing = {0.5, 0.5, 1.0};
    spec.background_hu = 40;
    spec.vessels.push_back(
        {vascalc::CylinderShape{{10.0, 10.0, 15.0}, {0.0, 0.0, 1.0}, 5.0, 15.0}, 300});
    return spec;
}

// Brute-force lumen oracle for tube_spec: distance from the z axis line at
// (10, 10), computed with independent arithmetic.
inline bool tube_lumen_contains(int x, int y, int /*z*/) {
    const double px = (x + 0.5) * 0.5;
    const double py = (y + 0.5) * 0.5;
    return std::hypot(px - 10.0, py - 10.0) <= 5.0;
}

}  // namespace testutil
