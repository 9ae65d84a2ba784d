#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "vascalc/types.hpp"
#include "vascalc/window.hpp"

namespace vascalc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Finite cylinder: points within radius_mm of the axis line and within
/// half_length_mm of the center along the axis.
struct CylinderShape {
    Vec3 center_mm;
    Vec3 axis{0.0, 0.0, 1.0};
    double radius_mm = 0.0;
    double half_length_mm = 0.0;
};

/// Axis-aligned box.
struct BoxShape {
    Vec3 center_mm;
    Vec3 size_mm;
};

struct Vessel {
    CylinderShape shape;
    std::int16_t lumen_hu = 300;
};

/// Arc-shaped wall deposit on a parent vessel: voxels whose radial distance
/// from the vessel axis lies in [r_inner_mm, r_outer_mm], whose angle about
/// the axis lies in the arc, and whose slice index lies in the span.
struct Calcification {
    int vessel = 0;
    int slice_begin = 0;
    int slice_end = 0;
    double angle_begin_deg = 0.0;
    double angle_end_deg = 360.0;
    double r_inner_mm = 0.0;
    double r_outer_mm = 0.0;
    std::int16_t calc_hu = 900;
};

struct Bone {
    std::variant<CylinderShape, BoxShape> shape;
    std::int16_t hu = 700;
};

/// Metal rod plus a simple high/low-HU band standing in for streak artifacts.
struct ScrewArtifact {
    CylinderShape rod;
    std::int16_t rod_hu = 3000;
    BoxShape streak;
    std::int16_t streak_hu = -200;
};

/// Thin high-HU shell hugging a vessel segment from the outside.
struct StentArtifact {
    int vessel = 0;
    int slice_begin = 0;
    int slice_end = 0;
    double thickness_mm = 0.0;
    std::int16_t hu = 2500;
};

/// Slice span where the vessel lumen reverts to uncontrasted blood.
struct ContrastDropout {
    int vessel = 0;
    int slice_begin = 0;
    int slice_end = 0;
    std::int16_t blood_hu = 40;
};

using Artifact = std::variant<ScrewArtifact, StentArtifact, ContrastDropout>;

/// Synthetic CT scene with analytic ground truth. Voxel membership is
/// decided by the voxel-center-inside-shape predicate; overlapping shapes
/// resolve by fixed priority background < bone < lumen < calcification <
/// artifact. A fixed rng_seed reproduces the volume bit for bit.
struct PhantomSpec {
    Dims dims;
    VoxelSpacing spacing;
    std::int16_t background_hu = -50;
    std::vector<Vessel> vessels;
    std::vector<Calcification> calcifications;
    std::vector<Bone> bones;
    std::vector<Artifact> artifacts;
    double noise_sigma = 0.0;
    std::uint64_t rng_seed = 0;
};

struct PhantomOutput {
    CtVolume volume;
    /// Union of lumen and calcification-shell voxels.
    MaskVolume vessel_mask;
    /// Calcification-shell voxels only.
    MaskVolume calcium_mask;
};

/// Throws InvalidArgumentError describing the first geometry violation.
void validate_phantom_spec(const PhantomSpec& spec);

PhantomOutput generate_phantom(const PhantomSpec& spec);

/// Analytic pipeline answer for noise-free specs: the number of
/// calcium-mask voxels inside the range whose windowed byte strictly
/// exceeds the threshold. Throws if spec.noise_sigma != 0, where exact
/// agreement cannot be promised.
std::uint64_t expected_calcium(const PhantomSpec& spec, const Window& window,
                               std::uint8_t threshold, const SliceRange& range);

/// Reads a spec from its JSON file form.
PhantomSpec load_phantom_spec(const std::filesystem::path& path);

namespace detail {

/// Voxel-center position for grid index (x, y, z).
inline Vec3 voxel_center(int x, int y, int z, const VoxelSpacing& s) {
    return {(static_cast<double>(x) + 0.5) * s.sx, (static_cast<double>(y) + 0.5) * s.sy,
            (static_cast<double>(z) + 0.5) * s.sz};
}

/// Precomputed scene evaluator shared by the parallel and serial
/// generators; classification of one voxel is a pure function.
class PhantomEval {
public:
    explicit PhantomEval(const PhantomSpec& spec);

    struct VoxelClass {
        double hu;
        bool vessel;
        bool calcium;
    };
    [[nodiscard]] VoxelClass classify(const Vec3& p, int slice_index) const;

private:
    struct VesselFrame {
        Vec3 center;
        Vec3 axis_unit;
        Vec3 u;  // in-plane reference for the angular coordinate
        Vec3 v;
        double radius;
        double half_length;
        std::int16_t lumen_hu;
    };
    const PhantomSpec& spec_;
    std::vector<VesselFrame> frames_;
    // Normalized axes cached per bone and per artifact (zero where the
    // entry is not a cylinder), so classify stays cheap.
    std::vector<Vec3> bone_axis_units_;
    std::vector<Vec3> rod_axis_units_;

    [[nodiscard]] bool in_lumen(const Vec3& p, std::size_t vessel_idx) const;
};

}  // namespace detail

}  // namespace vascalc
