#include "geovec/io/zip.hpp"

#include <zlib.h>

#include <cstring>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec::io {

namespace {

constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;

std::uint16_t u16(const std::string& b, std::size_t off) {
  if (off + 2 > b.size()) throw Error(ErrorKind::MalformedInput, "truncated zip archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[off]) |
                                    static_cast<unsigned char>(b[off + 1]) << 8);
}

std::uint32_t u32(const std::string& b, std::size_t off) {
  return static_cast<std::uint32_t>(u16(b, off)) |
         static_cast<std::uint32_t>(u16(b, off + 2)) << 16;
}

std::string basename(const std::string& name) {
  const auto slash = name.find_last_of('/');
  return slash == std::string::npos ? name : name.substr(slash + 1);
}

}  // namespace

ZipArchive ZipArchive::open(const std::string& path) { return from_bytes(read_file(path)); }

ZipArchive ZipArchive::from_bytes(std::string bytes) {
  ZipArchive zip;
  zip.bytes_ = std::move(bytes);
  const std::string& b = zip.bytes_;
  if (b.size() < 22) throw Error(ErrorKind::MalformedInput, "not a zip archive (too short)");

  // The end record sits in the last 22 + 65535 (comment) bytes.
  std::size_t eocd = std::string::npos;
  const std::size_t lowest = b.size() > 22 + 65535 ? b.size() - 22 - 65535 : 0;
  for (std::size_t pos = b.size() - 22 + 1; pos-- > lowest;) {
    if (u32(b, pos) == kEndOfCentralDirSig) {
      eocd = pos;
      break;
    }
  }
  if (eocd == std::string::npos) {
    throw Error(ErrorKind::MalformedInput, "not a zip archive (no central directory)");
  }
  const std::uint16_t count = u16(b, eocd + 10);
  std::size_t off = u32(b, eocd + 16);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(b, off) != kCentralHeaderSig) {
      throw Error(ErrorKind::MalformedInput, "corrupt zip central directory");
    }
    Entry e;
    e.method = u16(b, off + 10);
    e.crc = u32(b, off + 16);
    e.compressed_size = u32(b, off + 20);
    e.uncompressed_size = u32(b, off + 24);
    const std::uint16_t name_len = u16(b, off + 28);
    const std::uint16_t extra_len = u16(b, off + 30);
    const std::uint16_t comment_len = u16(b, off + 32);
    e.local_header_offset = u32(b, off + 42);
    if (off + 46 + name_len > b.size()) throw Error(ErrorKind::MalformedInput, "truncated zip");
    zip.entries_[b.substr(off + 46, name_len)] = e;
    off += 46 + name_len + extra_len + comment_len;
  }
  return zip;
}

std::vector<std::string> ZipArchive::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

const ZipArchive::Entry* ZipArchive::lookup(const std::string& name) const {
  if (const auto it = entries_.find(name); it != entries_.end()) return &it->second;
  for (const auto& [entry_name, e] : entries_) {
    if (basename(entry_name) == name) return &e;
  }
  return nullptr;
}

bool ZipArchive::contains(const std::string& name) const { return lookup(name) != nullptr; }

std::string ZipArchive::read(const std::string& name) const {
  const Entry* e = lookup(name);
  if (e == nullptr) throw Error(ErrorKind::NotFound, "zip entry missing: " + name);
  const std::size_t off = e->local_header_offset;
  if (u32(bytes_, off) != kLocalHeaderSig) {
    throw Error(ErrorKind::MalformedInput, "corrupt zip local header for " + name);
  }
  const std::size_t data = off + 30 + u16(bytes_, off + 26) + u16(bytes_, off + 28);
  if (data + e->compressed_size > bytes_.size()) {
    throw Error(ErrorKind::MalformedInput, "truncated zip entry " + name);
  }
  std::string out;
  if (e->method == 0) {
    out = bytes_.substr(data, e->compressed_size);
  } else if (e->method == 8) {
    out.resize(e->uncompressed_size);
    z_stream zs;
    std::memset(&zs, 0, sizeof zs);
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
      throw Error(ErrorKind::MalformedInput, "inflate init failed");
    }
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes_.data() + data));
    zs.avail_in = e->compressed_size;
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = e->uncompressed_size;
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != e->uncompressed_size) {
      throw Error(ErrorKind::MalformedInput, "corrupt deflate data in " + name);
    }
  } else {
    throw Error(ErrorKind::MalformedInput,
                "unsupported zip compression method " + std::to_string(e->method));
  }
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data()),
                         static_cast<uInt>(out.size()));
  if (crc != e->crc) throw Error(ErrorKind::MalformedInput, "zip CRC mismatch in " + name);
  return out;
}

}  // namespace geovec::io
