#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace geovec::io {

// Read-only view of a zip archive held in memory. Supports stored and
// deflated entries, which is all GTFS producers emit.
class ZipArchive {
 public:
  static ZipArchive open(const std::string& path);
  static ZipArchive from_bytes(std::string bytes);

  std::vector<std::string> names() const;
  // Matches the exact entry name first, then an entry whose basename equals
  // `name` (feeds zipped with a top-level folder).
  bool contains(const std::string& name) const;
  std::string read(const std::string& name) const;

 private:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t crc = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_header_offset = 0;
  };

  const Entry* lookup(const std::string& name) const;

  std::string bytes_;
  std::map<std::string, Entry> entries_;
};

}  // namespace geovec::io
