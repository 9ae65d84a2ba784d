#include "vascalc/text_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

#include "vascalc/errors.hpp"

namespace vascalc {

std::string format_double_exact(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

void write_file_atomic(const std::filesystem::path& path, const void* data, std::size_t bytes) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write: " + tmp.string());
        }
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

}  // namespace vascalc
