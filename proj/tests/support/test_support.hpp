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

#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <random>
#include <string>
#include <string_view>

#include <unistd.h>

#include "narrate/container.hpp"
#include "narrate/overlay.hpp"
#include "narrate/process.hpp"

namespace narrate::testing {

inline std::filesystem::path fixture(std::string_view name) {
  return std::filesystem::path(NARRATE_FIXTURE_DIR) / std::string(name);
}

// Fresh directory removed when the object goes out of scope.
class ScratchDir {
 public:
  ScratchDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("narrate-test-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / std::string(name); }

 private:
  std::filesystem::path path_;
};

inline std::string fake_bridge(std::string_view args = {}) {
  std::string cmd = shell_quote(NARRATE_FAKE_BRIDGE);
  if (!args.empty()) cmd += " " + std::string(args);
  return cmd;
}

inline std::string stub_encoder() {
  return "sh " + shell_quote(NARRATE_STUB_ENCODER) + " {in} {out}";
}

inline std::map<std::string, std::string> entry_map(const ContainerModel& model) {
  std::map<std::string, std::string> out;
  for (const auto& e : model.entries()) out[e.name] = e.data;
  return out;
}

// Moves every clipBegin/clipEnd of every SMIL document by `shift_s`.
inline void shift_clips(ContainerModel& epub, double shift_s) {
  static const std::regex clock(R"rx((clip(?:Begin|End))="([^"]*)")rx");
  for (const auto& path : epub.paths()) {
    if (!path.ends_with(".smil")) continue;
    const std::string& smil = epub.bytes(path);
    std::string out;
    auto last = smil.cbegin();
    for (std::sregex_iterator it(smil.begin(), smil.end(), clock), end; it != end; ++it) {
      out.append(last, (*it)[0].first);
      out += (*it)[1].str() + "=\"" + format_clock(parse_clock((*it)[2].str()) + shift_s) + "\"";
      last = (*it)[0].second;
    }
    out.append(last, smil.cend());
    epub.put(path, std::move(out));
  }
}

}  // namespace narrate::testing
