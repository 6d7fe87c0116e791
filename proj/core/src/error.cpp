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

#include "narrate/error.hpp"

namespace narrate {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotZip: return "NotZip";
    case ErrorCode::MissingMimetype: return "MissingMimetype";
    case ErrorCode::MissingContainerXml: return "MissingContainerXml";
    case ErrorCode::MalformedOpf: return "MalformedOpf";
    case ErrorCode::DanglingSpineRef: return "DanglingSpineRef";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedXhtml: return "MalformedXhtml";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::EngineFailure: return "EngineFailure";
    case ErrorCode::UnsplittableOverflow: return "UnsplittableOverflow";
    case ErrorCode::RateMismatch: return "RateMismatch";
    case ErrorCode::EncoderFailure: return "EncoderFailure";
    case ErrorCode::EmptyChapter: return "EmptyChapter";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::MissingChapterItem: return "MissingChapterItem";
    case ErrorCode::NoOverlays: return "NoOverlays";
    case ErrorCode::BrokenTextRef: return "BrokenTextRef";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

void rethrow_with_context(const Error& e, std::string_view context) {
  std::string message(context);
  message += ": ";
  message += e.what();
  throw Error(e.code(), message);
}

}  // namespace narrate
