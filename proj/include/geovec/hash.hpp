#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace geovec {

// 64-bit FNV-1a.
std::uint64_t content_hash(std::string_view bytes);
std::uint64_t file_hash(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t h);

}  // namespace geovec
