// Copyright 2026 The narrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "narrate/zip.hpp"

#include <zlib.h>

#include <limits>

#include "narrate/error.hpp"

namespace narrate::zip {
namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint16_t kMethodStored = 0;
constexpr std::uint16_t kMethodDeflate = 8;
constexpr std::uint16_t kFlagEncrypted = 0x0001;
constexpr std::uint16_t kFlagUtf8 = 0x0800;

[[noreturn]] void not_zip(const std::string& why) {
  throw Error(ErrorCode::NotZip, "not a readable zip archive: " + why);
}

class Reader {
 public:
  Reader(std::string_view image, std::size_t pos) : image_(image), pos_(pos) {}

  std::uint16_t u16() {
    need(2);
    const auto* p = reinterpret_cast<const unsigned char*>(image_.data() + pos_);
    pos_ += 2;
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32() {
    need(4);
    const auto* p = reinterpret_cast<const unsigned char*>(image_.data() + pos_);
    pos_ += 4;
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    const auto out = image_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  void skip(std::size_t n) { bytes(n); }

 private:
  void need(std::size_t n) const {
    if (pos_ > image_.size() || image_.size() - pos_ < n) not_zip("truncated structure");
  }
  std::string_view image_;
  std::size_t pos_;
};

class Writer {
 public:
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<char>(v & 0xFF));
    out_.push_back(static_cast<char>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out_.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
  void bytes(std::string_view b) { out_.append(b); }
  std::size_t size() const noexcept { return out_.size(); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

std::string inflate_raw(std::string_view compressed, std::size_t expected_size) {
  std::string out(expected_size, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) not_zip("inflate init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected_size) not_zip("corrupt deflate stream");
  return out;
}

std::string deflate_raw(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::IoFailure, "deflate init failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::IoFailure, "deflate failed");
  return out;
}

bool has_non_ascii(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) return true;
  }
  return false;
}

}  // namespace

std::uint32_t crc32(std::string_view data) noexcept {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large payloads.
  constexpr std::size_t kChunk = std::size_t{1} << 30;
  for (std::size_t off = 0; off < data.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, data.size() - off);
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<Entry> read_archive(std::string_view image) {
  if (image.size() < 22) not_zip("file too small");
  // The end-of-central-directory record sits within the last 64 KiB + 22 bytes.
  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = image.size() > 0xFFFF + 22 ? image.size() - 0xFFFF - 22 : 0;
  for (std::size_t i = image.size() - 22 + 1; i-- > lowest;) {
    if (Reader(image, i).u32() == kEndOfCentralDirSig) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) not_zip("no end of central directory");

  Reader end(image, eocd + 4);
  const std::uint16_t disk = end.u16();
  const std::uint16_t cd_disk = end.u16();
  end.u16();
  const std::uint16_t total = end.u16();
  const std::uint32_t cd_size = end.u32();
  const std::uint32_t cd_offset = end.u32();
  if (disk != 0 || cd_disk != 0) not_zip("multi-volume archives are unsupported");
  if (total == 0xFFFF || cd_offset == 0xFFFFFFFF || cd_size == 0xFFFFFFFF) {
    not_zip("zip64 archives are unsupported");
  }

  std::vector<Entry> entries;
  entries.reserve(total);
  Reader cd(image, cd_offset);
  for (std::uint16_t n = 0; n < total; ++n) {
    if (cd.u32() != kCentralHeaderSig) not_zip("bad central directory header");
    cd.u16();  // version made by
    cd.u16();  // version needed
    const std::uint16_t flags = cd.u16();
    const std::uint16_t method = cd.u16();
    Entry entry;
    entry.dos_time = cd.u16();
    entry.dos_date = cd.u16();
    const std::uint32_t crc = cd.u32();
    const std::uint32_t csize = cd.u32();
    const std::uint32_t usize = cd.u32();
    const std::uint16_t name_len = cd.u16();
    const std::uint16_t extra_len = cd.u16();
    const std::uint16_t comment_len = cd.u16();
    cd.u16();  // disk start
    cd.u16();  // internal attributes
    cd.u32();  // external attributes
    const std::uint32_t local_offset = cd.u32();
    entry.name = std::string(cd.bytes(name_len));
    cd.skip(extra_len);
    cd.skip(comment_len);

    if ((flags & kFlagEncrypted) != 0) not_zip("encrypted member " + entry.name);
    if (csize == 0xFFFFFFFF || usize == 0xFFFFFFFF || local_offset == 0xFFFFFFFF) {
      not_zip("zip64 member " + entry.name);
    }

    Reader local(image, local_offset);
    if (local.u32() != kLocalHeaderSig) not_zip("bad local header for " + entry.name);
    local.skip(22);
    const std::uint16_t local_name_len = local.u16();
    const std::uint16_t local_extra_len = local.u16();
    local.skip(local_name_len);
    local.skip(local_extra_len);
    const std::string_view payload = local.bytes(csize);

    if (method == kMethodStored) {
      if (csize != usize) not_zip("size mismatch in stored member " + entry.name);
      entry.data = std::string(payload);
      entry.stored = true;
    } else if (method == kMethodDeflate) {
      entry.data = inflate_raw(payload, usize);
    } else {
      not_zip("unsupported compression method " + std::to_string(method) + " for " + entry.name);
    }
    if (crc32(entry.data) != crc) not_zip("CRC mismatch in " + entry.name);
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string write_archive(std::span<const Entry> entries) {
  struct Record {
    std::uint32_t crc;
    std::uint32_t csize;
    std::uint32_t usize;
    std::uint32_t offset;
    std::uint16_t method;
    std::uint16_t flags;
  };
  if (entries.size() >= 0xFFFF) throw Error(ErrorCode::IoFailure, "too many archive members");

  Writer w;
  std::vector<Record> records;
  records.reserve(entries.size());
  constexpr auto kMax32 = std::numeric_limits<std::uint32_t>::max();
  for (const Entry& e : entries) {
    Record r{};
    if (e.data.size() >= kMax32 || w.size() >= kMax32) {
      throw Error(ErrorCode::IoFailure, "archive member too large: " + e.name);
    }
    r.crc = crc32(e.data);
    r.usize = static_cast<std::uint32_t>(e.data.size());
    r.offset = static_cast<std::uint32_t>(w.size());
    r.flags = has_non_ascii(e.name) ? kFlagUtf8 : 0;
    std::string deflated;
    std::string_view payload = e.data;
    if (e.stored) {
      r.method = kMethodStored;
    } else {
      r.method = kMethodDeflate;
      deflated = deflate_raw(e.data);
      payload = deflated;
    }
    r.csize = static_cast<std::uint32_t>(payload.size());

    w.u32(kLocalHeaderSig);
    w.u16(20);
    w.u16(r.flags);
    w.u16(r.method);
    w.u16(e.dos_time);
    w.u16(e.dos_date);
    w.u32(r.crc);
    w.u32(r.csize);
    w.u32(r.usize);
    w.u16(static_cast<std::uint16_t>(e.name.size()));
    w.u16(0);
    w.bytes(e.name);
    w.bytes(payload);
    records.push_back(r);
  }

  const std::size_t cd_offset = w.size();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    const Record& r = records[i];
    w.u32(kCentralHeaderSig);
    w.u16((3 << 8) | 20);  // made by: UNIX, zip version 2.0
    w.u16(20);
    w.u16(r.flags);
    w.u16(r.method);
    w.u16(e.dos_time);
    w.u16(e.dos_date);
    w.u32(r.crc);
    w.u32(r.csize);
    w.u32(r.usize);
    w.u16(static_cast<std::uint16_t>(e.name.size()));
    w.u16(0);
    w.u16(0);
    w.u16(0);
    w.u16(0);
    const bool is_dir = !e.name.empty() && e.name.back() == '/';
    w.u32(is_dir ? ((040755u << 16) | 0x10) : (0100644u << 16));
    w.u32(r.offset);
    w.bytes(e.name);
  }
  const std::size_t cd_size = w.size() - cd_offset;
  if (w.size() >= kMax32) throw Error(ErrorCode::IoFailure, "archive too large");

  w.u32(kEndOfCentralDirSig);
  w.u16(0);
  w.u16(0);
  w.u16(static_cast<std::uint16_t>(entries.size()));
  w.u16(static_cast<std::uint16_t>(entries.size()));
  w.u32(static_cast<std::uint32_t>(cd_size));
  w.u32(static_cast<std::uint32_t>(cd_offset));
  w.u16(0);
  return w.take();
}

}  // namespace narrate::zip
