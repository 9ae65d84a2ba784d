#include "vascalc/serial_ref.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "vascalc/errors.hpp"
#include "vascalc/rng.hpp"

namespace vascalc::serial {

AutoWindowResult auto_window(const CtVolume& vol) {
    check_volume(vol);
    std::int16_t mn = std::numeric_limits<std::int16_t>::max();
    std::int16_t mx = std::numeric_limits<std::int16_t>::min();
    for (const std::int16_t v : vol.voxels) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (mn == mx) return {Window{static_cast<double>(mn) + 0.5, 1.0}, true};
    const double min_d = mn;
    const double max_d = mx;
    return {Window{(min_d + max_d) * 0.5, max_d - min_d}, false};
}

ByteVolume window_to_byte(const CtVolume& vol, const Window& window) {
    check_volume(vol);
    if (!(window.width > 0.0) || !std::isfinite(window.width) || !std::isfinite(window.level)) {
        throw InvalidArgumentError("window width must be positive and finite");
    }
    ByteVolume out{vol.dims, vol.spacing, {}, window.level, window.width};
    out.bytes.resize(vol.voxels.size());
    for (std::size_t i = 0; i < vol.voxels.size(); ++i) {
        out.bytes[i] = window_byte(vol.voxels[i], window);
    }
    return out;
}

ByteVolume apply_mask(const ByteVolume& bv, const MaskVolume& mask) {
    require_same_dims(bv.dims, mask.dims, "apply_mask");
    ByteVolume out{bv.dims, bv.spacing, {}, bv.window_level, bv.window_width};
    out.bytes.resize(bv.bytes.size());
    for (std::size_t i = 0; i < bv.bytes.size(); ++i) {
        out.bytes[i] = mask.bits[i] ? bv.bytes[i] : std::uint8_t{0};
    }
    return out;
}

MaskVolume threshold_calcium(const ByteVolume& masked, std::uint8_t threshold) {
    MaskVolume out{masked.dims, masked.spacing, {}};
    out.bits.resize(masked.bytes.size());
    for (std::size_t i = 0; i < masked.bytes.size(); ++i) {
        out.bits[i] = masked.bytes[i] > threshold ? 1 : 0;
    }
    return out;
}

MaskVolume filter_components_min_area(const MaskVolume& calc, double min_area_mm2,
                                      int connectivity_2d) {
    if (!(min_area_mm2 >= 0.0) || !std::isfinite(min_area_mm2)) {
        throw InvalidArgumentError("min_area_mm2 must be >= 0 and finite");
    }
    if (connectivity_2d != 4 && connectivity_2d != 8) {
        throw InvalidArgumentError("connectivity_2d must be 4 or 8");
    }
    const int nx = calc.dims.nx;
    const int ny = calc.dims.ny;
    const std::size_t sxy = calc.dims.slice_size();
    const double pixel_area = calc.spacing.pixel_area_mm2();

    MaskVolume out{calc.dims, calc.spacing, {}};
    out.bits.resize(calc.bits.size());

    // Queue-based labeling, one slice at a time. The traversal order differs
    // from the parallel version on purpose; the component partition is the
    // same either way.
    std::vector<std::int32_t> labels;
    std::deque<std::size_t> queue;
    for (int z = 0; z < calc.dims.nz; ++z) {
        const std::size_t off = static_cast<std::size_t>(z) * sxy;
        labels.assign(sxy, -1);
        std::vector<std::uint64_t> comp_sizes;
        for (std::size_t start = 0; start < sxy; ++start) {
            if (calc.bits[off + start] == 0 || labels[start] >= 0) continue;
            const auto comp = static_cast<std::int32_t>(comp_sizes.size());
            std::uint64_t size = 0;
            queue.clear();
            queue.push_back(start);
            labels[start] = comp;
            while (!queue.empty()) {
                const std::size_t p = queue.front();
                queue.pop_front();
                ++size;
                const int x = static_cast<int>(p % static_cast<std::size_t>(nx));
                const int y = static_cast<int>(p / static_cast<std::size_t>(nx));
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity_2d == 4 && dx != 0 && dy != 0) continue;
                        const int qx = x + dx, qy = y + dy;
                        if (qx < 0 || qx >= nx || qy < 0 || qy >= ny) continue;
                        const std::size_t q = static_cast<std::size_t>(qy) *
                                                  static_cast<std::size_t>(nx) +
                                              static_cast<std::size_t>(qx);
                        if (calc.bits[off + q] != 0 && labels[q] < 0) {
                            labels[q] = comp;
                            queue.push_back(q);
                        }
                    }
            }
            comp_sizes.push_back(size);
        }
        for (std::size_t p = 0; p < sxy; ++p) {
            if (calc.bits[off + p] == 0) {
                out.bits[off + p] = 0;
                continue;
            }
            const double area =
                static_cast<double>(comp_sizes[static_cast<std::size_t>(labels[p])]) * pixel_area;
            out.bits[off + p] = area < min_area_mm2 ? 0 : 1;
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
    const std::size_t sxy = calc.dims.slice_size();
    report.per_slice_counts.assign(static_cast<std::size_t>(nslices), 0);
    report.per_slice_volumes_mm3.resize(static_cast<std::size_t>(nslices));
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < static_cast<std::size_t>(nslices); ++s) {
        const std::size_t off =
            (static_cast<std::size_t>(range.start_slice) + s) * sxy;
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < sxy; ++i) c += calc.bits[off + i];
        report.per_slice_counts[s] = c;
        report.per_slice_volumes_mm3[s] = static_cast<double>(c) * report.voxel_volume_mm3;
        total += c;
    }
    report.total_count = total;
    report.total_volume_mm3 = static_cast<double>(total) * report.voxel_volume_mm3;
    return report;
}

ConfusionCounts confusion(const MaskVolume& pred, const MaskVolume& truth) {
    require_same_dims(pred.dims, truth.dims, "confusion");
    ConfusionCounts c{0, 0, 0, 0};
    for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0;
        const bool t = truth.bits[i] != 0;
        c.tp += p && t;
        c.fp += p && !t;
        c.fn += !p && t;
        c.tn += !p && !t;
    }
    return c;
}

double per_slice_dice_mean(const MaskVolume& pred, const MaskVolume& truth) {
    require_same_dims(pred.dims, truth.dims, "per_slice_dice_mean");
    const std::size_t sxy = pred.dims.slice_size();
    double sum = 0.0;
    for (int z = 0; z < pred.dims.nz; ++z) {
        const std::size_t off = static_cast<std::size_t>(z) * sxy;
        std::uint64_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < sxy; ++i) {
            const bool p = pred.bits[off + i] != 0;
            const bool t = truth.bits[off + i] != 0;
            tp += p && t;
            fp += p && !t;
            fn += !p && t;
        }
        const std::uint64_t denom = 2 * tp + fp + fn;
        sum += denom == 0 ? 1.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
    }
    return sum / static_cast<double>(pred.dims.nz);
}

RegionGrowResult region_grow(const CtVolume& vol, const RegionGrowParams& params) {
    check_volume(vol);
    if (params.seeds.empty()) throw InvalidArgumentError("region_grow: at least one seed required");
    for (const Voxel& s : params.seeds) {
        if (!vol.dims.contains(s.x, s.y, s.z))
            throw InvalidArgumentError("region_grow: seed outside volume bounds");
    }
    if (params.lower_hu > params.upper_hu)
        throw InvalidArgumentError("region_grow: lower_hu must not exceed upper_hu");
    if (params.connectivity != 6 && params.connectivity != 26)
        throw InvalidArgumentError("region_grow: connectivity must be 6 or 26");
    if (params.max_voxels == 0) throw InvalidArgumentError("region_grow: max_voxels must be >= 1");

    const Dims dims = vol.dims;
    const auto in_band = [&](std::size_t idx) {
        const std::int16_t v = vol.voxels[idx];
        return v >= params.lower_hu && v <= params.upper_hu;
    };

    RegionGrowResult res;
    res.mask = MaskVolume{dims, vol.spacing, std::vector<std::uint8_t>(dims.total(), 0)};

    std::vector<std::size_t> level;
    for (const Voxel& s : params.seeds) {
        const std::size_t idx = dims.index(s.x, s.y, s.z);
        if (in_band(idx)) level.push_back(idx);
    }
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
    if (level.empty()) {
        res.no_seed_in_band = true;
        return res;
    }

    const std::size_t cap = std::min(params.max_voxels, dims.total());
    std::uint64_t accepted = 0;
    const auto accept_level = [&](std::vector<std::size_t>& lvl) {
        if (accepted + lvl.size() > cap) {
            lvl.resize(static_cast<std::size_t>(cap - accepted));
            res.truncated = true;
        }
        for (std::size_t idx : lvl) res.mask.bits[idx] = 1;
        accepted += lvl.size();
    };
    accept_level(level);

    const std::size_t sxy = dims.slice_size();
    const auto snx = static_cast<std::size_t>(dims.nx);
    std::vector<std::size_t> next;
    while (!level.empty() && !res.truncated) {
        next.clear();
        for (const std::size_t idx : level) {
            const int z = static_cast<int>(idx / sxy);
            const std::size_t rem = idx % sxy;
            const int y = static_cast<int>(rem / snx);
            const int x = static_cast<int>(rem % snx);
            for (int dz = -1; dz <= 1; ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0 && dz == 0) continue;
                        if (params.connectivity == 6 &&
                            std::abs(dx) + std::abs(dy) + std::abs(dz) != 1)
                            continue;
                        const int px = x + dx, py = y + dy, pz = z + dz;
                        if (!dims.contains(px, py, pz)) continue;
                        const std::size_t nidx = dims.index(px, py, pz);
                        if (res.mask.bits[nidx] == 0 && in_band(nidx)) next.push_back(nidx);
                    }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty()) break;
        if (accepted >= cap) {
            // The cap landed exactly on a level boundary; the live frontier
            // proves the cap, not the band edge, is what stopped growth.
            res.truncated = true;
            break;
        }
        accept_level(next);
        level.swap(next);
    }

    res.grown_count = accepted;
    return res;
}

PhantomOutput generate_phantom(const PhantomSpec& spec) {
    validate_phantom_spec(spec);
    const detail::PhantomEval eval(spec);

    PhantomOutput out;
    out.volume.dims = spec.dims;
    out.volume.spacing = spec.spacing;
    out.volume.voxels.resize(spec.dims.total());
    out.vessel_mask.dims = spec.dims;
    out.vessel_mask.spacing = spec.spacing;
    out.vessel_mask.bits.resize(spec.dims.total());
    out.calcium_mask.dims = spec.dims;
    out.calcium_mask.spacing = spec.spacing;
    out.calcium_mask.bits.resize(spec.dims.total());

    std::size_t idx = 0;
    for (int z = 0; z < spec.dims.nz; ++z) {
        for (int y = 0; y < spec.dims.ny; ++y) {
            for (int x = 0; x < spec.dims.nx; ++x, ++idx) {
                const Vec3 p = detail::voxel_center(x, y, z, spec.spacing);
                const auto cls = eval.classify(p, z);
                double hu = cls.hu;
                if (spec.noise_sigma > 0.0) hu += spec.noise_sigma * gaussian_at(spec.rng_seed, idx);
                const double r = std::clamp(std::round(hu), -32768.0, 32767.0);
                out.volume.voxels[idx] = static_cast<std::int16_t>(r);
                out.vessel_mask.bits[idx] = cls.vessel ? 1 : 0;
                out.calcium_mask.bits[idx] = cls.calcium ? 1 : 0;
            }
        }
    }
    return out;
}

}  // namespace vascalc::serial
