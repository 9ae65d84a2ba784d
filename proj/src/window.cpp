#include "vascalc/window.hpp"

#include <limits>

namespace vascalc {

AutoWindowResult auto_window(const CtVolume& vol) {
    check_volume(vol);
    std::int16_t mn = std::numeric_limits<std::int16_t>::max();
    std::int16_t mx = std::numeric_limits<std::int16_t>::min();
    const auto n = static_cast<std::int64_t>(vol.voxels.size());
#pragma omp parallel for reduction(min : mn) reduction(max : mx) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int16_t v = vol.voxels[static_cast<std::size_t>(i)];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (mn == mx) {
        // Constant volume: any positive width works; pick one whose map sends
        // the single sample value to byte 0 exactly.
        return {Window{static_cast<double>(mn) + 0.5, 1.0}, true};
    }
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
    const auto n = static_cast<std::int64_t>(vol.voxels.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        out.bytes[static_cast<std::size_t>(i)] =
            window_byte(vol.voxels[static_cast<std::size_t>(i)], window);
    }
    return out;
}

}  // namespace vascalc
