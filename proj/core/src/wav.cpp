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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/waveform.hpp"

namespace narrate {
namespace {

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xFF));
}

std::uint16_t get_u16(std::string_view b, std::size_t pos) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[pos]) |
                                    (static_cast<unsigned char>(b[pos + 1]) << 8));
}

std::uint32_t get_u32(std::string_view b, std::size_t pos) {
  return static_cast<std::uint32_t>(get_u16(b, pos)) |
         (static_cast<std::uint32_t>(get_u16(b, pos + 2)) << 16);
}

[[noreturn]] void bad_wav(const std::string& why) {
  throw Error(ErrorCode::IoFailure, "unreadable WAV: " + why);
}

}  // namespace

std::string encode_wav(const Waveform& w) {
  const std::size_t data_bytes = w.size() * 2;
  if (data_bytes > 0xFFFFFFFFu - 36) throw Error(ErrorCode::IoFailure, "waveform too long for WAV");
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, static_cast<std::uint32_t>(36 + data_bytes));
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, static_cast<std::uint32_t>(data_bytes));
  for (const float s : w.samples) {
    const float clipped = std::clamp(s, -1.0f, 1.0f);
    const auto v = static_cast<std::int16_t>(std::lround(clipped * 32767.0f));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void write_wav(const Waveform& w, const std::string& path) { write_file(path, encode_wav(w)); }

Waveform decode_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    bad_wav("missing RIFF/WAVE header");
  }
  bool have_fmt = false;
  Waveform w;
  std::uint16_t bits = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = get_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    // Streaming writers leave 0xFFFFFFFF in the data size; clamp to the file.
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (id == "fmt ") {
      if (available < 16) bad_wav("short fmt chunk");
      const std::uint16_t format = get_u16(bytes, body);
      const std::uint16_t channels = get_u16(bytes, body + 2);
      w.sample_rate = static_cast<int>(get_u32(bytes, body + 4));
      bits = get_u16(bytes, body + 14);
      if (format != 1 && format != 0xFFFE) bad_wav("not PCM");
      if (channels != 1) bad_wav("expected mono, got " + std::to_string(channels) + " channels");
      if (bits != 16) bad_wav("expected 16-bit samples, got " + std::to_string(bits));
      if (w.sample_rate <= 0) bad_wav("invalid sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) bad_wav("data chunk before fmt");
      const std::size_t n = available / 2;
      w.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::int16_t>(get_u16(bytes, body + 2 * i));
        w.samples[i] = std::max(-1.0f, static_cast<float>(v) / 32767.0f);
      }
      return w;
    }
    pos = body + available + (available & 1);
  }
  bad_wav("no data chunk");
}

}  // namespace narrate
