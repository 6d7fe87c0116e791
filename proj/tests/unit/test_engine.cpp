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

#include <gtest/gtest.h>

#include "narrate/engine.hpp"
#include "narrate/error.hpp"
#include "narrate/process.hpp"
#include "test_support.hpp"

namespace narrate {
namespace {

using testing::fake_bridge;

ErrorCode failure_of(SpeechEngine& engine, const std::string& text) {
  try {
    engine.synthesize({text, "en", "voice.wav"});
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidConfig;
}

TEST(Subprocess, EchoesLinesAndReportsExit) {
  Subprocess p("cat");
  ASSERT_TRUE(p.write_line("hello"));
  EXPECT_EQ(p.read_line(), "hello");
  EXPECT_EQ(p.terminate(), 0);
}

TEST(Subprocess, EnvironmentOverride) {
  Subprocess p("echo \"$NARRATE_PROBE\"", {{"NARRATE_PROBE", "42"}});
  EXPECT_EQ(p.read_line(), "42");
  EXPECT_EQ(p.read_line(), std::nullopt);
}

TEST(Subprocess, RunShellStatus) {
  EXPECT_EQ(run_shell("exit 3"), 3);
  EXPECT_EQ(run_shell("true"), 0);
  EXPECT_EQ(run_shell("kill -9 $$"), 128 + 9);
}

TEST(Subprocess, ShellQuote) {
  EXPECT_EQ(shell_quote("a b"), "'a b'");
  EXPECT_EQ(shell_quote("it's"), "'it'\\''s'");
  Subprocess p("printf '%s\\n' " + shell_quote("x'y z"));
  EXPECT_EQ(p.read_line(), "x'y z");
}

TEST(SubprocessEngine, HandshakeAndHappyPath) {
  SubprocessEngine engine({fake_bridge("--rate 22050"), false});
  EXPECT_EQ(engine.sample_rate(), 22050);
  const Waveform w = engine.synthesize({"Hello.", "en", "voice.wav"});
  EXPECT_EQ(w.sample_rate, 22050);
  EXPECT_EQ(w.size(), 220u * 6);
  EXPECT_EQ(engine.synthesize({"Again, please.", "en", "voice.wav"}).size(), 220u * 14);
}

TEST(SubprocessEngine, TokenOverflowMapsToOverflow) {
  SubprocessEngine engine({fake_bridge("--overflow-above 5"), false});
  EXPECT_EQ(failure_of(engine, "far too long"), ErrorCode::Overflow);
  EXPECT_EQ(engine.synthesize({"tiny", "en", "v.wav"}).size(), 220u * 4);
}

TEST(SubprocessEngine, EngineErrorMapsToEngineFailure) {
  SubprocessEngine engine({fake_bridge("--fail-text boom"), false});
  EXPECT_EQ(failure_of(engine, "boom"), ErrorCode::EngineFailure);
}

TEST(SubprocessEngine, MismatchedIdIsEngineFailure) {
  SubprocessEngine engine({fake_bridge("--wrong-id"), false});
  EXPECT_EQ(failure_of(engine, "Hello."), ErrorCode::EngineFailure);
}

TEST(SubprocessEngine, BadHandshake) {
  EXPECT_THROW(SubprocessEngine({fake_bridge("--bad-handshake"), false}), Error);
  EXPECT_THROW(SubprocessEngine({"exit 0", false}), Error);
}

TEST(SubprocessEngine, GpuFlagReachesBridge) {
  EXPECT_THROW(SubprocessEngine({fake_bridge("--require-gpu"), false}), Error);
  SubprocessEngine engine({fake_bridge("--require-gpu"), true});
  EXPECT_EQ(engine.synthesize({"ok", "en", "v.wav"}).size(), 220u * 2);
}

TEST(SubprocessEngine, RestartsAfterCrash) {
  SubprocessEngine engine({fake_bridge("--exit-after 1"), false});
  EXPECT_NO_THROW(engine.synthesize({"one", "en", "v.wav"}));
  EXPECT_EQ(failure_of(engine, "two"), ErrorCode::EngineFailure);
  EXPECT_NO_THROW(engine.synthesize({"three", "en", "v.wav"}));
}

TEST(SubprocessEngine, RejectsStereoOutput) {
  SubprocessEngine engine({fake_bridge("--stereo"), false});
  EXPECT_EQ(failure_of(engine, "Hello."), ErrorCode::EngineFailure);
}

}  // namespace
}  // namespace narrate
