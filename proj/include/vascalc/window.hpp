#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "vascalc/types.hpp"

namespace vascalc {

/// HU display/storage window: the interval [level - width/2, level + width/2]
/// is mapped affinely onto [0, 255].
struct Window {
    double level = 0.0;
    double width = 0.0;
};

/// Scalar HU -> byte map shared by every windowing path. Rounds half away
/// from zero (std::round) so results are platform-independent, then clamps.
inline std::uint8_t window_byte(double hu, const Window& w) {
    const double lo = w.level - w.width * 0.5;
    const double t = std::round((hu - lo) / w.width * 255.0);
    return static_cast<std::uint8_t>(std::clamp(t, 0.0, 255.0));
}

struct AutoWindowResult {
    Window window;
    /// True when the volume is constant (min == max). The returned window
    /// then maps every sample to byte 0; callers should surface a warning.
    bool degenerate = false;
};

/// Min-max window over the whole volume: minimum maps to 0, maximum to 255.
AutoWindowResult auto_window(const CtVolume& vol);

/// Applies the window to every sample. Throws InvalidArgumentError unless
/// width is positive and finite. The window used is recorded in the result.
ByteVolume window_to_byte(const CtVolume& vol, const Window& window);

}  // namespace vascalc
