// Times each parallel kernel against its serial reference on a moderate
// phantom and verifies that both produce identical results. Usage:
//
//   bench_kernels [nx ny nz]
//
// Exits nonzero if any kernel disagrees with its reference.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "vascalc/calcium.hpp"
#include "vascalc/mask_ops.hpp"
#include "vascalc/metrics.hpp"
#include "vascalc/phantom.hpp"
#include "vascalc/region_grow.hpp"
#include "vascalc/serial_ref.hpp"
#include "vascalc/window.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace vascalc;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

template <typename SerialFn, typename ParallelFn, typename EqFn>
void bench(const char* name, SerialFn&& serial_fn, ParallelFn&& parallel_fn, EqFn&& eq) {
    auto t0 = std::chrono::steady_clock::now();
    auto serial_result = serial_fn();
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto parallel_result = parallel_fn();
    const double parallel_s = seconds_since(t0);

    const bool match = eq(serial_result, parallel_result);
    if (!match) ++failures;
    std::printf("%-24s serial %8.1f ms   parallel %8.1f ms   x%.2f   %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                match ? "match" : "MISMATCH");
}

bool reports_equal(const CalcificationReport& a, const CalcificationReport& b) {
    return a.total_count == b.total_count && a.total_volume_mm3 == b.total_volume_mm3 &&
           a.per_slice_counts == b.per_slice_counts &&
           a.per_slice_volumes_mm3 == b.per_slice_volumes_mm3;
}

}  // namespace

int main(int argc, char** argv) {
    Dims dims{192, 192, 120};
    if (argc == 4) {
        dims = {std::atoi(argv[1]), std::atoi(argv[2]), std::atoi(argv[3])};
    } else if (argc != 1) {
        std::fprintf(stderr, "usage: %s [nx ny nz]\n", argv[0]);
        return 2;
    }

    const VoxelSpacing spacing{0.7, 0.7, 1.0};
    PhantomSpec spec;
    spec.dims = dims;
    spec.spacing = spacing;
    spec.background_hu = -40;
    spec.noise_sigma = 10.0;
    spec.rng_seed = 42;
    const double cx = dims.nx * spacing.sx * 0.5;
    const double cy = dims.ny * spacing.sy * 0.5;
    const double cz = dims.nz * spacing.sz * 0.5;
    const double vessel_radius = std::min(cx, cy) * 0.12;
    spec.vessels.push_back(
        {CylinderShape{{cx, cy, cz}, {0.0, 0.0, 1.0}, vessel_radius, cz * 0.9}, 300});
    Calcification calc;
    calc.vessel = 0;
    calc.slice_begin = dims.nz / 6;
    calc.slice_end = dims.nz * 5 / 6;
    calc.angle_begin_deg = 0.0;
    calc.angle_end_deg = 180.0;
    calc.r_inner_mm = vessel_radius * 0.75;
    calc.r_outer_mm = vessel_radius;
    calc.calc_hu = 900;
    spec.calcifications.push_back(calc);
    spec.bones.push_back(
        {BoxShape{{cx * 0.3, cy * 0.3, cz}, {cx * 0.2, cy * 0.2, cz * 1.6}}, 700});

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("volume: %dx%dx%d (%.1f M voxels)\n\n", dims.nx, dims.ny, dims.nz,
                static_cast<double>(dims.total()) / 1e6);

    PhantomOutput phantom;
    bench(
        "generate_phantom", [&] { return serial::generate_phantom(spec); },
        [&] { return generate_phantom(spec); },
        [&](const PhantomOutput& a, const PhantomOutput& b) {
            phantom = b;
            return a.volume.voxels == b.volume.voxels &&
                   a.vessel_mask.bits == b.vessel_mask.bits &&
                   a.calcium_mask.bits == b.calcium_mask.bits;
        });

    const Window window{600.0, 1200.0};
    ByteVolume bytes;
    bench(
        "window_to_byte", [&] { return serial::window_to_byte(phantom.volume, window); },
        [&] { return window_to_byte(phantom.volume, window); },
        [&](const ByteVolume& a, const ByteVolume& b) {
            bytes = b;
            return a.bytes == b.bytes;
        });

    ByteVolume masked;
    bench(
        "apply_mask", [&] { return serial::apply_mask(bytes, phantom.vessel_mask); },
        [&] { return apply_mask(bytes, phantom.vessel_mask); },
        [&](const ByteVolume& a, const ByteVolume& b) {
            masked = b;
            return a.bytes == b.bytes;
        });

    MaskVolume calc_mask;
    bench(
        "threshold_calcium", [&] { return serial::threshold_calcium(masked); },
        [&] { return threshold_calcium(masked); },
        [&](const MaskVolume& a, const MaskVolume& b) {
            calc_mask = b;
            return a.bits == b.bits;
        });

    bench(
        "filter_components", [&] { return serial::filter_components_min_area(calc_mask, 1.0); },
        [&] { return filter_components_min_area(calc_mask, 1.0); },
        [&](const MaskVolume& a, const MaskVolume& b) { return a.bits == b.bits; });

    const SliceRange range{0, dims.nz - 1};
    const ScoreProvenance prov{145, window.level, window.width, std::nullopt};
    bench(
        "score", [&] { return serial::score(calc_mask, spacing, range, prov); },
        [&] { return score(calc_mask, spacing, range, prov); }, reports_equal);

    bench(
        "confusion", [&] { return serial::confusion(calc_mask, phantom.calcium_mask); },
        [&] { return confusion(calc_mask, phantom.calcium_mask); },
        [&](const ConfusionCounts& a, const ConfusionCounts& b) {
            return a.tp == b.tp && a.fp == b.fp && a.fn == b.fn && a.tn == b.tn;
        });

    RegionGrowParams grow;
    grow.seeds = {{dims.nx / 2, dims.ny / 2, dims.nz / 2}};
    grow.lower_hu = 200;
    grow.upper_hu = 400;
    bench(
        "region_grow", [&] { return serial::region_grow(phantom.volume, grow); },
        [&] { return region_grow(phantom.volume, grow); },
        [&](const RegionGrowResult& a, const RegionGrowResult& b) {
            return a.mask.bits == b.mask.bits && a.grown_count == b.grown_count &&
                   a.truncated == b.truncated && a.no_seed_in_band == b.no_seed_in_band;
        });

    if (failures) {
        std::fprintf(stderr, "\n%d kernel(s) disagreed with the serial reference\n", failures);
        return 1;
    }
    return 0;
}
