#include "vascalc/ctv_io.hpp"

#include "vascalc/text_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace vascalc {
namespace {

namespace fs = std::filesystem;

double parse_double(std::string_view s, const char* field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw HeaderError(std::string("malformed CTV header: bad number in ") + field);
    }
    return v;
}

long long parse_int(std::string_view s, const char* field) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw HeaderError(std::string("malformed CTV header: bad integer in ") + field);
    }
    return v;
}

std::vector<std::string_view> split_bracket_list(std::string_view s, const char* field) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw HeaderError(std::string("malformed CTV header: ") + field +
                          " must be a [a,b,c] list");
    }
    s.remove_prefix(1);
    s.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

struct CtvHeader {
    Dims dims;
    VoxelSpacing spacing;
    std::string dtype;
    fs::path payload;  // absolute
};

const std::array<std::string_view, 7> kHeaderKeys = {
    "magic", "dims", "spacing_mm", "dtype", "order", "endian", "payload"};

CtvHeader read_header(const fs::path& header_path) {
    std::ifstream in(header_path);
    if (!in) {
        throw IoError("file not found: " + header_path.string());
    }
    std::map<std::string, std::string, std::less<>> fields;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw HeaderError("malformed CTV header: line without '=': \"" + line + "\"");
        }
        std::string key = line.substr(0, eq);
        bool known = false;
        for (auto k : kHeaderKeys) known = known || (k == key);
        if (!known) {
            throw HeaderError("malformed CTV header: unknown field \"" + key + "\"");
        }
        if (!fields.emplace(key, line.substr(eq + 1)).second) {
            throw HeaderError("malformed CTV header: duplicate field \"" + key + "\"");
        }
    }
    for (auto k : kHeaderKeys) {
        if (!fields.contains(k)) {
            throw HeaderError("malformed CTV header: missing field \"" + std::string(k) + "\"");
        }
    }
    if (fields["magic"] != "CTV1") {
        throw HeaderError("malformed CTV header: magic is not CTV1");
    }
    if (fields["order"] != "x-fastest") {
        throw HeaderError("malformed CTV header: order must be x-fastest");
    }
    if (fields["endian"] != "little") {
        throw HeaderError("malformed CTV header: endian must be little");
    }

    CtvHeader h;
    auto dims = split_bracket_list(fields["dims"], "dims");
    if (dims.size() != 3) throw HeaderError("malformed CTV header: dims needs 3 entries");
    h.dims = {static_cast<int>(parse_int(dims[0], "dims")),
              static_cast<int>(parse_int(dims[1], "dims")),
              static_cast<int>(parse_int(dims[2], "dims"))};
    auto sp = split_bracket_list(fields["spacing_mm"], "spacing_mm");
    if (sp.size() != 3) throw HeaderError("malformed CTV header: spacing_mm needs 3 entries");
    h.spacing = {parse_double(sp[0], "spacing_mm"), parse_double(sp[1], "spacing_mm"),
                 parse_double(sp[2], "spacing_mm")};
    h.dtype = fields["dtype"];
    if (h.dtype != "i16" && h.dtype != "u8") {
        throw HeaderError("malformed CTV header: dtype must be i16 or u8");
    }
    try {
        check_dims(h.dims);
        check_spacing(h.spacing);
    } catch (const InvalidArgumentError& e) {
        throw HeaderError(std::string("malformed CTV header: ") + e.what());
    }
    h.payload = header_path.parent_path() / fs::path(fields["payload"]);
    return h;
}

std::vector<std::byte> read_payload(const fs::path& payload_path, std::size_t expected_bytes) {
    std::ifstream in(payload_path, std::ios::binary);
    if (!in) {
        throw IoError("file not found: " + payload_path.string());
    }
    in.seekg(0, std::ios::end);
    const auto actual = static_cast<std::size_t>(in.tellg());
    if (actual != expected_bytes) {
        throw PayloadSizeError("payload " + payload_path.string() + " holds " +
                               std::to_string(actual) + " bytes, expected " +
                               std::to_string(expected_bytes));
    }
    in.seekg(0, std::ios::beg);
    std::vector<std::byte> raw(expected_bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(expected_bytes));
    if (!in) {
        throw IoError("failed reading payload: " + payload_path.string());
    }
    return raw;
}

std::vector<std::int16_t> decode_i16_le(const std::vector<std::byte>& raw) {
    std::vector<std::int16_t> out(raw.size() / 2);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out.data(), raw.data(), raw.size());
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto b0 = static_cast<std::uint16_t>(raw[2 * i]);
            const auto b1 = static_cast<std::uint16_t>(raw[2 * i + 1]);
            out[i] = static_cast<std::int16_t>(static_cast<std::uint16_t>(b0 | (b1 << 8)));
        }
    }
    return out;
}

fs::path payload_path_for(const fs::path& header_path) {
    fs::path p = header_path;
    p.replace_extension(".raw");
    if (p == header_path) {
        throw InvalidArgumentError("header path must not itself end in .raw: " +
                                   header_path.string());
    }
    return p;
}

void save_ctv(const fs::path& header_path, const Dims& dims, const VoxelSpacing& spacing,
              const char* dtype, const void* data, std::size_t bytes) {
    const fs::path payload = payload_path_for(header_path);
    write_file_atomic(payload, data, bytes);

    std::ostringstream header;
    header << "magic=CTV1\n"
           << "dims=[" << dims.nx << ',' << dims.ny << ',' << dims.nz << "]\n"
           << "spacing_mm=[" << format_double_exact(spacing.sx) << ','
           << format_double_exact(spacing.sy) << ',' << format_double_exact(spacing.sz)
           << "]\n"
           << "dtype=" << dtype << "\n"
           << "order=x-fastest\n"
           << "endian=little\n"
           << "payload=" << payload.filename().string() << "\n";
    const std::string text = header.str();
    write_file_atomic(header_path, text.data(), text.size());
}

}  // namespace

CtVolume load_volume(const std::filesystem::path& header_path) {
    const CtvHeader h = read_header(header_path);
    if (h.dtype != "i16") {
        throw DtypeError("volume payload dtype is \"" + h.dtype + "\", expected i16");
    }
    const auto raw = read_payload(h.payload, h.dims.total() * 2);
    CtVolume vol{h.dims, h.spacing, decode_i16_le(raw)};
    check_volume(vol);
    return vol;
}

void save_volume(const CtVolume& vol, const std::filesystem::path& header_path) {
    check_volume(vol);
    if constexpr (std::endian::native == std::endian::little) {
        save_ctv(header_path, vol.dims, vol.spacing, "i16", vol.voxels.data(),
                 vol.voxels.size() * 2);
    } else {
        std::vector<std::byte> raw(vol.voxels.size() * 2);
        for (std::size_t i = 0; i < vol.voxels.size(); ++i) {
            const auto u = static_cast<std::uint16_t>(vol.voxels[i]);
            raw[2 * i] = static_cast<std::byte>(u & 0xff);
            raw[2 * i + 1] = static_cast<std::byte>(u >> 8);
        }
        save_ctv(header_path, vol.dims, vol.spacing, "i16", raw.data(), raw.size());
    }
}

MaskVolume load_mask(const std::filesystem::path& header_path) {
    const CtvHeader h = read_header(header_path);
    if (h.dtype != "u8") {
        throw DtypeError("mask payload dtype is \"" + h.dtype + "\", expected u8");
    }
    const auto raw = read_payload(h.payload, h.dims.total());
    MaskVolume mask{h.dims, h.spacing, {}};
    mask.bits.resize(raw.size());
    std::memcpy(mask.bits.data(), raw.data(), raw.size());
    check_mask(mask);
    return mask;
}

void save_mask(const MaskVolume& mask, const std::filesystem::path& header_path) {
    check_mask(mask);
    save_ctv(header_path, mask.dims, mask.spacing, "u8", mask.bits.data(), mask.bits.size());
}

}  // namespace vascalc
