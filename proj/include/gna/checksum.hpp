#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace gna {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t file_checksum(const std::filesystem::path& path);
std::string to_hex(std::uint64_t value);

} // namespace gna
