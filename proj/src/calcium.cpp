#include "vascalc/calcium.hpp"

#include <cmath>
#include <string>

#include "vascalc/mask_ops.hpp"

namespace vascalc {

MaskVolume threshold_calcium(const ByteVolume& masked, std::uint8_t threshold) {
    MaskVolume out{masked.dims, masked.spacing, {}};
    out.bits.resize(masked.bytes.size());
    const auto n = static_cast<std::int64_t>(masked.bytes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.bits[k] = masked.bytes[k] > threshold ? 1 : 0;
    }
    return out;
}

namespace {

// Flood-fill labeling of one transverse slice, then a pass clearing every
// component whose area falls below the minimum.
void filter_slice(const std::uint8_t* in, std::uint8_t* out, int nx, int ny,
                  double pixel_area_mm2, double min_area_mm2, int connectivity,
                  std::vector<std::int32_t>& label_buf, std::vector<std::size_t>& stack_buf) {
    const std::size_t npix = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    label_buf.assign(npix, -1);
    std::vector<std::uint64_t> comp_sizes;

    for (std::size_t start = 0; start < npix; ++start) {
        if (in[start] == 0 || label_buf[start] >= 0) continue;
        const auto comp = static_cast<std::int32_t>(comp_sizes.size());
        std::uint64_t size = 0;
        stack_buf.clear();
        stack_buf.push_back(start);
        label_buf[start] = comp;
        while (!stack_buf.empty()) {
            const std::size_t p = stack_buf.back();
            stack_buf.pop_back();
            ++size;
            const int x = static_cast<int>(p % static_cast<std::size_t>(nx));
            const int y = static_cast<int>(p / static_cast<std::size_t>(nx));
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (connectivity == 4 && dx != 0 && dy != 0) continue;
                    const int qx = x + dx, qy = y + dy;
                    if (qx < 0 || qx >= nx || qy < 0 || qy >= ny) continue;
                    const std::size_t q =
                        static_cast<std::size_t>(qy) * static_cast<std::size_t>(nx) +
                        static_cast<std::size_t>(qx);
                    if (in[q] != 0 && label_buf[q] < 0) {
                        label_buf[q] = comp;
                        stack_buf.push_back(q);
                    }
                }
        }
        comp_sizes.push_back(size);
    }

    for (std::size_t p = 0; p < npix; ++p) {
        if (in[p] == 0) {
            out[p] = 0;
            continue;
        }
        const double area = static_cast<double>(comp_sizes[static_cast<std::size_t>(
                                label_buf[p])]) *
                            pixel_area_mm2;
        out[p] = area < min_area_mm2 ? 0 : 1;
    }
}

}  // namespace

MaskVolume filter_components_min_area(const MaskVolume& calc, double min_area_mm2,
                                      int connectivity_2d) {
    if (!(min_area_mm2 >= 0.0) || !std::isfinite(min_area_mm2)) {
        throw InvalidArgumentError("min_area_mm2 must be >= 0 and finite");
    }
    if (connectivity_2d != 4 && connectivity_2d != 8) {
        throw InvalidArgumentError("connectivity_2d must be 4 or 8");
    }
    MaskVolume out{calc.dims, calc.spacing, {}};
    out.bits.resize(calc.bits.size());
    const std::size_t sxy = calc.dims.slice_size();
    const double pixel_area = calc.spacing.pixel_area_mm2();
#pragma omp parallel
    {
        std::vector<std::int32_t> label_buf;
        std::vector<std::size_t> stack_buf;
#pragma omp for schedule(dynamic)
        for (std::int64_t z = 0; z < calc.dims.nz; ++z) {
            const std::size_t off = static_cast<std::size_t>(z) * sxy;
            filter_slice(calc.bits.data() + off, out.bits.data() + off, calc.dims.nx,
                         calc.dims.ny, pixel_area, min_area_mm2, connectivity_2d, label_buf,
                         stack_buf);
        }
    }
    return out;
}

CalcificationReport score(const MaskVolume& calc, const VoxelSpacing& spacing,
                          const SliceRange& range, const ScoreProvenance& provenance) {
    check_spacing(spacing);
    check_slice_range(range, calc.dims);

    CalcificationReport report;
    report.threshold_used = provenance.threshold_used;
    report.window_level = provenance.window_level;
    report.window_width = provenance.window_width;
    report.min_area_filter_mm2 = provenance.min_area_filter_mm2;
    report.slice_range = range;
    report.voxel_volume_mm3 = spacing.voxel_volume_mm3();

    const int nslices = range.slice_count();
    report.per_slice_counts.assign(static_cast<std::size_t>(nslices), 0);
    const std::size_t sxy = calc.dims.slice_size();
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < nslices; ++s) {
        const std::size_t off =
            (static_cast<std::size_t>(range.start_slice) + static_cast<std::size_t>(s)) * sxy;
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < sxy; ++i) c += calc.bits[off + i];
        report.per_slice_counts[static_cast<std::size_t>(s)] = c;
    }

    report.per_slice_volumes_mm3.resize(static_cast<std::size_t>(nslices));
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < static_cast<std::size_t>(nslices); ++s) {
        total += report.per_slice_counts[s];
        report.per_slice_volumes_mm3[s] =
            static_cast<double>(report.per_slice_counts[s]) * report.voxel_volume_mm3;
    }
    report.total_count = total;
    report.total_volume_mm3 = static_cast<double>(total) * report.voxel_volume_mm3;
    return report;
}

CalcificationReport run_pipeline(const CtVolume& vol, const MaskVolume& vessel_mask,
                                 const PipelineParams& params) {
    require_same_dims(vol.dims, vessel_mask.dims, "run_pipeline");
    const Window window = params.window ? *params.window : auto_window(vol).window;

    const ByteVolume windowed = window_to_byte(vol, window);
    const ByteVolume vessel_bytes = apply_mask(windowed, vessel_mask);
    MaskVolume calc = threshold_calcium(vessel_bytes, params.threshold);
    if (params.min_area_mm2) {
        calc = filter_components_min_area(calc, *params.min_area_mm2,
                                          params.component_connectivity);
    }
    ScoreProvenance prov;
    prov.threshold_used = params.threshold;
    prov.window_level = window.level;
    prov.window_width = window.width;
    prov.min_area_filter_mm2 = params.min_area_mm2;
    return score(calc, vol.spacing, params.range, prov);
}

}  // namespace vascalc
