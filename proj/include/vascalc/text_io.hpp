#pragma once

#include <filesystem>
#include <string>

namespace vascalc {

/// Shortest decimal form that round-trips back to the same double, so
/// numbers survive a write/parse cycle bit-exactly.
std::string format_double_exact(double v);

/// Writes through a temp file + rename; a failed write leaves no partial
/// output behind. Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, const void* data, std::size_t bytes);

inline void write_text_file_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, text.data(), text.size());
}

}  // namespace vascalc
