#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <random>

#include "vascalc/calcium.hpp"
#include "vascalc/mask_ops.hpp"
#include "vascalc/metrics.hpp"
#include "vascalc/phantom.hpp"
#include "vascalc/region_grow.hpp"
#include "vascalc/serial_ref.hpp"
#include "vascalc/window.hpp"

#include "helpers.hpp"

using namespace vascalc;

namespace {

// Oversubscribing a small machine is fine here; the point is to force the
// parallel code paths through genuine multi-thread scheduling.
void use_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

PhantomSpec noisy_scene() {
    PhantomSpec spec;
    spec.dims = {48, 40, 32};
    spec.spacing = {0.7, 0.7, 1.25};
    spec.background_hu = -30;
    spec.noise_sigma = 12.0;
    spec.rng_seed = 2024;
    Vessel vessel;
    vessel.shape.center_mm = {16.8, 14.0, 20.0};
    vessel.shape.radius_mm = 4.0;
    vessel.shape.half_length_mm = 18.0;
    vessel.lumen_hu = 300;
    spec.vessels.push_back(vessel);
    Calcification calc;
    calc.vessel = 0;
    calc.slice_begin = 8;
    calc.slice_end = 24;
    calc.angle_begin_deg = 20.0;
    calc.angle_end_deg = 200.0;
    calc.r_inner_mm = 3.0;
    calc.r_outer_mm = 4.0;
    spec.calcifications.push_back(calc);
    Bone bone;
    CylinderShape femur;
    femur.center_mm = {8.0, 22.0, 20.0};
    femur.axis = {0.0, 0.0, 1.0};
    femur.radius_mm = 3.0;
    femur.half_length_mm = 18.0;
    bone.shape = femur;
    spec.bones.push_back(bone);
    return spec;
}

}  // namespace

TEST_CASE("phantom generation matches the serial reference bit for bit") {
    use_threads(4);
    const PhantomSpec spec = noisy_scene();
    const PhantomOutput par = generate_phantom(spec);
    const PhantomOutput ser = serial::generate_phantom(spec);
    CHECK(par.volume.voxels == ser.volume.voxels);
    CHECK(par.vessel_mask.bits == ser.vessel_mask.bits);
    CHECK(par.calcium_mask.bits == ser.calcium_mask.bits);
}

TEST_CASE("windowing kernels agree with the serial reference") {
    use_threads(4);
    std::mt19937 rng(51);
    for (int round = 0; round < 5; ++round) {
        const CtVolume vol = testutil::random_volume(rng, {23, 17, 9});

        const AutoWindowResult aw_par = auto_window(vol);
        const AutoWindowResult aw_ser = serial::auto_window(vol);
        CHECK(aw_par.window.level == aw_ser.window.level);
        CHECK(aw_par.window.width == aw_ser.window.width);
        CHECK(aw_par.degenerate == aw_ser.degenerate);

        const Window window{250.0, 700.0};
        const ByteVolume bv_par = window_to_byte(vol, window);
        const ByteVolume bv_ser = serial::window_to_byte(vol, window);
        CHECK(bv_par.bytes == bv_ser.bytes);

        const MaskVolume mask = testutil::random_mask(rng, {23, 17, 9}, 0.5);
        CHECK(apply_mask(bv_par, mask).bytes == serial::apply_mask(bv_ser, mask).bytes);
    }
}

TEST_CASE("threshold, filter and score agree with the serial reference") {
    use_threads(4);
    std::mt19937 rng(52);
    for (int round = 0; round < 5; ++round) {
        const CtVolume vol = testutil::random_volume(rng, {19, 21, 11}, {0.7, 0.7, 1.0});
        const ByteVolume bv = window_to_byte(vol, Window{400.0, 1000.0});

        const MaskVolume calc_par = threshold_calcium(bv, 120);
        const MaskVolume calc_ser = serial::threshold_calcium(bv, 120);
        CHECK(calc_par.bits == calc_ser.bits);

        for (int conn : {4, 8}) {
            const MaskVolume f_par = filter_components_min_area(calc_par, 1.0, conn);
            const MaskVolume f_ser = serial::filter_components_min_area(calc_ser, 1.0, conn);
            CHECK(f_par.bits == f_ser.bits);
        }

        const ScoreProvenance prov{120, 400.0, 1000.0, std::nullopt};
        const CalcificationReport r_par = score(calc_par, vol.spacing, {1, 9}, prov);
        const CalcificationReport r_ser = serial::score(calc_ser, vol.spacing, {1, 9}, prov);
        CHECK(r_par.total_count == r_ser.total_count);
        CHECK(r_par.total_volume_mm3 == r_ser.total_volume_mm3);
        CHECK(r_par.per_slice_counts == r_ser.per_slice_counts);
        CHECK(r_par.per_slice_volumes_mm3 == r_ser.per_slice_volumes_mm3);
    }
}

TEST_CASE("overlap metrics agree with the serial reference") {
    use_threads(4);
    std::mt19937 rng(53);
    for (int round = 0; round < 5; ++round) {
        const MaskVolume a = testutil::random_mask(rng, {14, 13, 7}, 0.4);
        const MaskVolume b = testutil::random_mask(rng, {14, 13, 7}, 0.4);
        CHECK(confusion(a, b) == serial::confusion(a, b));
        CHECK(per_slice_dice_mean(a, b) == serial::per_slice_dice_mean(a, b));
    }
}

TEST_CASE("region growth agrees with the serial reference on the phantom") {
    use_threads(4);
    PhantomSpec spec = noisy_scene();
    spec.noise_sigma = 0.0;
    const PhantomOutput out = generate_phantom(spec);

    RegionGrowParams params;
    params.seeds = {{24, 20, 16}};
    params.lower_hu = 200;
    params.upper_hu = 400;
    const RegionGrowResult par = region_grow(out.volume, params);
    const RegionGrowResult ser = serial::region_grow(out.volume, params);
    CHECK(par.mask.bits == ser.mask.bits);
    CHECK(par.grown_count == ser.grown_count);
    CHECK(par.no_seed_in_band == ser.no_seed_in_band);
    CHECK(par.truncated == ser.truncated);
}

TEST_CASE("region growth is invariant across thread counts") {
    std::mt19937 rng(54);
    for (int round = 0; round < 4; ++round) {
        // coarsen random HU so the band forms larger connected blobs
        CtVolume vol = testutil::random_volume(rng, {16, 16, 12});
        for (auto& s : vol.voxels) s = static_cast<std::int16_t>((s / 400) * 400);

        RegionGrowParams params;
        params.seeds = {{8, 8, 6}, {3, 12, 2}};
        params.lower_hu = 0;
        params.upper_hu = 800;
        params.connectivity = (round % 2 == 0) ? 6 : 26;
        if (round == 3) params.max_voxels = 50;

        use_threads(1);
        const RegionGrowResult one = region_grow(vol, params);
        use_threads(3);
        const RegionGrowResult three = region_grow(vol, params);
        use_threads(7);
        const RegionGrowResult seven = region_grow(vol, params);

        CHECK(one.mask.bits == three.mask.bits);
        CHECK(one.mask.bits == seven.mask.bits);
        CHECK(one.grown_count == three.grown_count);
        CHECK(one.grown_count == seven.grown_count);
        CHECK(one.truncated == seven.truncated);

        const RegionGrowResult ser = serial::region_grow(vol, params);
        CHECK(one.mask.bits == ser.mask.bits);
        CHECK(one.truncated == ser.truncated);
    }
    use_threads(4);
}

TEST_CASE("truncated growth picks the same voxels at any thread count") {
    use_threads(4);
    PhantomSpec spec = testutil::tube_spec();
    const PhantomOutput out = generate_phantom(spec);

    RegionGrowParams params;
    params.seeds = {{20, 20, 15}};
    params.lower_hu = 200;
    params.upper_hu = 400;
    params.max_voxels = 137;

    const RegionGrowResult first = region_grow(out.volume, params);
    CHECK(first.truncated);
    CHECK(first.grown_count == 137);
    use_threads(2);
    const RegionGrowResult second = region_grow(out.volume, params);
    CHECK(first.mask.bits == second.mask.bits);
    CHECK(first.mask.bits == serial::region_grow(out.volume, params).mask.bits);
    use_threads(4);
}
