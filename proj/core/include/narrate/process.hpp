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

#include <sys/types.h>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace narrate {

using EnvironmentOverrides = std::vector<std::pair<std::string, std::string>>;

// A child process started through /bin/sh -c with pipes on its standard
// input and output. Standard error is inherited.
class Subprocess {
 public:
  Subprocess(const std::string& shell_command, const EnvironmentOverrides& env = {});
  ~Subprocess();
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  // False once the child has stopped reading.
  bool write_line(std::string_view line);
  // One line without its terminator; nullopt on end of stream.
  std::optional<std::string> read_line();
  // Closes the child's input and reaps it, killing it after `grace_ms`.
  int terminate(int grace_ms = 2000);

  pid_t pid() const noexcept { return pid_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
  std::optional<int> exit_status_;
};

// Runs a shell command to completion and returns its exit status (128 + signal
// when killed).
int run_shell(const std::string& shell_command, const EnvironmentOverrides& env = {});

// Single-quotes `arg` for /bin/sh.
std::string shell_quote(std::string_view arg);

}  // namespace narrate
