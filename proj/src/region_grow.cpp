#include "vascalc/region_grow.hpp"

#include <algorithm>
#include <array>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vascalc {
namespace {

struct NeighborTable {
    std::array<std::array<int, 3>, 26> offsets{};
    int count = 0;
};

NeighborTable neighbors_for(int connectivity) {
    NeighborTable t;
    if (connectivity == 6) {
        t.offsets = {{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
        t.count = 6;
        return t;
    }
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                t.offsets[static_cast<std::size_t>(t.count++)] = {dx, dy, dz};
            }
    return t;
}

void validate(const CtVolume& vol, const RegionGrowParams& p) {
    check_volume(vol);
    if (p.seeds.empty()) {
        throw InvalidArgumentError("region_grow: at least one seed required");
    }
    for (const Voxel& s : p.seeds) {
        if (!vol.dims.contains(s.x, s.y, s.z)) {
            throw InvalidArgumentError("region_grow: seed (" + std::to_string(s.x) + "," +
                                       std::to_string(s.y) + "," + std::to_string(s.z) +
                                       ") outside volume bounds");
        }
    }
    if (p.lower_hu > p.upper_hu) {
        throw InvalidArgumentError("region_grow: lower_hu must not exceed upper_hu");
    }
    if (p.connectivity != 6 && p.connectivity != 26) {
        throw InvalidArgumentError("region_grow: connectivity must be 6 or 26");
    }
    if (p.max_voxels == 0) {
        throw InvalidArgumentError("region_grow: max_voxels must be >= 1");
    }
}

}  // namespace

RegionGrowResult region_grow(const CtVolume& vol, const RegionGrowParams& params) {
    validate(vol, params);

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

    const NeighborTable nbr = neighbors_for(params.connectivity);
    const std::size_t sxy = dims.slice_size();
    const auto snx = static_cast<std::size_t>(dims.nx);

    std::vector<std::size_t> next;
    while (!level.empty() && !res.truncated) {
        next.clear();
#ifdef _OPENMP
        const int max_threads = omp_get_max_threads();
#else
        const int max_threads = 1;
#endif
        std::vector<std::vector<std::size_t>> found(static_cast<std::size_t>(max_threads));
        const auto lvl_n = static_cast<std::int64_t>(level.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t li = 0; li < lvl_n; ++li) {
#ifdef _OPENMP
            auto& bucket = found[static_cast<std::size_t>(omp_get_thread_num())];
#else
            auto& bucket = found[0];
#endif
            const std::size_t idx = level[static_cast<std::size_t>(li)];
            const int z = static_cast<int>(idx / sxy);
            const std::size_t rem = idx % sxy;
            const int y = static_cast<int>(rem / snx);
            const int x = static_cast<int>(rem % snx);
            for (int k = 0; k < nbr.count; ++k) {
                const auto& d = nbr.offsets[static_cast<std::size_t>(k)];
                const int px = x + d[0], py = y + d[1], pz = z + d[2];
                if (!dims.contains(px, py, pz)) continue;
                const std::size_t nidx = dims.index(px, py, pz);
                if (res.mask.bits[nidx] == 0 && in_band(nidx)) bucket.push_back(nidx);
            }
        }
        for (auto& bucket : found) {
            next.insert(next.end(), bucket.begin(), bucket.end());
        }
        // Sort + dedupe makes the level set independent of thread schedule
        // and gives the ascending-index order that the truncation rule uses.
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

}  // namespace vascalc
