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

#include <stdexcept>
#include <string>
#include <string_view>

namespace narrate {

enum class ErrorCode {
  // container
  NotZip,
  MissingMimetype,
  MissingContainerXml,
  MalformedOpf,
  DanglingSpineRef,
  IoFailure,
  // segmenter
  MalformedXhtml,
  // synthesis
  Overflow,
  EngineFailure,
  UnsplittableOverflow,
  // audio
  RateMismatch,
  EncoderFailure,
  // overlays
  EmptyChapter,
  InvariantViolation,
  MissingChapterItem,
  // drift
  NoOverlays,
  BrokenTextRef,
  EmptyInput,
  // configuration
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above. The
// message is a single line suitable for machine parsing by callers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Re-throws `e` with `context` prefixed to its message, keeping the code.
[[noreturn]] void rethrow_with_context(const Error& e, std::string_view context);

}  // namespace narrate
