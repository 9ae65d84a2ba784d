#include "vascalc/mask_ops.hpp"

#include "vascalc/ctv_io.hpp"

namespace vascalc {

MaskVolume import_mask(const std::filesystem::path& header_path, const Dims& expected_dims) {
    MaskVolume mask = load_mask(header_path);
    require_same_dims(mask.dims, expected_dims, "import_mask");
    return mask;
}

ByteVolume apply_mask(const ByteVolume& bv, const MaskVolume& mask) {
    require_same_dims(bv.dims, mask.dims, "apply_mask");
    ByteVolume out{bv.dims, bv.spacing, {}, bv.window_level, bv.window_width};
    out.bytes.resize(bv.bytes.size());
    const auto n = static_cast<std::int64_t>(bv.bytes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.bytes[k] = mask.bits[k] ? bv.bytes[k] : std::uint8_t{0};
    }
    return out;
}

}  // namespace vascalc
