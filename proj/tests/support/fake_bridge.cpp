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

// Scripted stand-in for a TTS bridge, speaking the line-JSON protocol.
//
//   fake_bridge [--rate N] [--overflow-above N] [--fail-text S] [--fail-times N]
//               [--bad-handshake] [--wrong-id] [--exit-after N] [--require-gpu]
//               [--stereo]
//
// Each request is answered with a tone lasting 10 ms per character.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <unistd.h>

#include "json.hpp"

namespace {

struct Options {
  int rate = 22050;
  long overflow_above = -1;
  std::string fail_text;
  int fail_times = 1 << 30;
  bool bad_handshake = false;
  bool wrong_id = false;
  long exit_after = -1;
  bool require_gpu = false;
  bool stereo = false;
};

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::string tone_wav(std::size_t frames, int rate, int channels) {
  std::string pcm;
  for (std::size_t i = 0; i < frames; ++i) {
    const double x = 0.25 * std::sin(2.0 * M_PI * 220.0 * static_cast<double>(i) / rate);
    const auto s = static_cast<std::int16_t>(std::lround(x * 32767.0));
    for (int c = 0; c < channels; ++c) put16(pcm, static_cast<std::uint16_t>(s));
  }
  std::string out = "RIFF";
  put32(out, static_cast<std::uint32_t>(36 + pcm.size()));
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, static_cast<std::uint16_t>(channels));
  put32(out, static_cast<std::uint32_t>(rate));
  put32(out, static_cast<std::uint32_t>(rate * channels * 2));
  put16(out, static_cast<std::uint16_t>(channels * 2));
  put16(out, 16);
  out += "data";
  put32(out, static_cast<std::uint32_t>(pcm.size()));
  return out + pcm;
}

std::size_t code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    const auto next = [&]() -> std::string { return i + 1 < argc ? argv[++i] : ""; };
    if (a == "--rate") opt.rate = std::stoi(next());
    else if (a == "--overflow-above") opt.overflow_above = std::stol(next());
    else if (a == "--fail-text") opt.fail_text = next();
    else if (a == "--fail-times") opt.fail_times = std::stoi(next());
    else if (a == "--bad-handshake") opt.bad_handshake = true;
    else if (a == "--wrong-id") opt.wrong_id = true;
    else if (a == "--exit-after") opt.exit_after = std::stol(next());
    else if (a == "--require-gpu") opt.require_gpu = true;
    else if (a == "--stereo") opt.stereo = true;
    else {
      std::cerr << "fake_bridge: unknown flag " << a << '\n';
      return 2;
    }
  }
  if (opt.require_gpu) {
    const char* gpu = std::getenv("TTS_USE_GPU");
    if (gpu == nullptr || std::string(gpu) != "1") return 3;
  }

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("fake-bridge-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);

  if (opt.bad_handshake) {
    std::cout << "{\"hello\":1}" << std::endl;
  } else {
    std::cout << nlohmann::json{{"ready", true}, {"sample_rate", opt.rate}}.dump() << std::endl;
  }

  long served = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (opt.exit_after >= 0 && served >= opt.exit_after) break;
    ++served;
    const auto req = nlohmann::json::parse(line);
    const long id = req.at("id").get<long>() + (opt.wrong_id ? 100 : 0);
    const std::string text = req.at("text").get<std::string>();
    nlohmann::json reply = {{"id", id}};
    if (opt.overflow_above >= 0 && static_cast<long>(code_points(text)) > opt.overflow_above) {
      reply["error"] = "token_overflow";
      reply["detail"] = "input exceeds the context window";
    } else if (!opt.fail_text.empty() && text.find(opt.fail_text) != std::string::npos && opt.fail_times > 0) {
      --opt.fail_times;
      reply["error"] = "engine_error";
      reply["detail"] = "scripted failure";
    } else {
      const auto frames = static_cast<std::size_t>(opt.rate / 100) * code_points(text);
      const auto path = dir / ("u" + std::to_string(served) + ".wav");
      std::ofstream(path, std::ios::binary) << tone_wav(frames, opt.rate, opt.stereo ? 2 : 1);
      reply["wav"] = path.string();
    }
    std::cout << reply.dump() << std::endl;
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return 0;
}
