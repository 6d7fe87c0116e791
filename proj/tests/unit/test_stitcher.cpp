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

#include <cstdint>
#include <filesystem>

#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/stitcher.hpp"
#include "narrate/waveform.hpp"
#include "test_support.hpp"

namespace narrate {
namespace {

Waveform constant(std::size_t n, float value, int rate) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.assign(n, value);
  return w;
}

std::uint32_t le32(const std::string& s, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[at + static_cast<std::size_t>(i)]);
  return v;
}

TEST(FadeOut, ZeroLengthIsIdentity) {
  const Waveform w = constant(100, 0.5f, 1000);
  EXPECT_EQ(fade_out(w, 0.0).samples, w.samples);
}

TEST(FadeOut, LinearRampToZero) {
  const Waveform out = fade_out(constant(200, 1.0f, 1000), 50.0);
  ASSERT_EQ(out.size(), 200u);
  for (std::size_t i = 0; i < 150; ++i) EXPECT_EQ(out.samples[i], 1.0f);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_FLOAT_EQ(out.samples[150 + i], static_cast<float>(49 - i) / 50.0f) << i;
  }
}

TEST(FadeOut, ShortWaveformRampedEntirely) {
  const Waveform out = fade_out(constant(10, 1.0f, 1000), 50.0);
  EXPECT_FLOAT_EQ(out.samples[0], 0.9f);
  EXPECT_FLOAT_EQ(out.samples[9], 0.0f);
}

TEST(FadeOut, SilenceStaysSilent) {
  EXPECT_EQ(fade_out(constant(500, 0.0f, 8000), 50.0).samples, std::vector<float>(500, 0.0f));
}

TEST(Stitch, OneUnit) {
  const Waveform unit = constant(48000, 0.3f, 24000);
  const StitchedChapter out = stitch(std::span<const Waveform>(&unit, 1), StitchParams{});
  EXPECT_EQ(out.audio.size(), 48000u + 3600u);
  EXPECT_DOUBLE_EQ(out.audio.duration(), 2.15);
  EXPECT_EQ(out.unit_durations, std::vector<double>{2.0});
  EXPECT_EQ(out.audio.samples.back(), 0.0f);
}

TEST(Stitch, TwoUnits) {
  const std::vector<Waveform> units{constant(48000, 0.3f, 24000), constant(72000, 0.3f, 24000)};
  const StitchedChapter out = stitch(units, StitchParams{});
  EXPECT_EQ(out.audio.size(), static_cast<std::size_t>(std::llround(5.30 * 24000)));
  EXPECT_EQ(out.unit_samples, (std::vector<std::size_t>{48000, 72000}));
  EXPECT_EQ(out.pad_samples, 3600u);
}

TEST(Stitch, Empty) {
  const StitchedChapter out = stitch(std::span<const Waveform>(), StitchParams{});
  EXPECT_TRUE(out.audio.empty());
  EXPECT_TRUE(out.unit_durations.empty());
}

TEST(Stitch, RateMismatch) {
  const std::vector<Waveform> units{constant(10, 0.1f, 24000), constant(10, 0.1f, 22050)};
  try {
    stitch(units, StitchParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RateMismatch);
  }
}

TEST(Stitch, DeltaRoundsToWholeSamples) {
  StitchParams p;
  p.delta_s = 0.1234567;
  p.sample_rate = 22050;
  EXPECT_EQ(p.pad_samples(), 2722u);  // round(2722.22)
  const std::vector<Waveform> units{constant(1000, 0.1f, 22050), constant(333, 0.1f, 22050)};
  const StitchedChapter out = stitch(units, p);
  EXPECT_DOUBLE_EQ(out.delta_s, 2722.0 / 22050.0);
  EXPECT_EQ(out.audio.size(), 1000u + 333u + 2 * 2722u);
}

TEST(Stitch, RejectsNegativeParams) {
  StitchParams p;
  p.delta_s = -0.1;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Wav, HeaderLayout) {
  const std::string wav = encode_wav(constant(24000, 0.0f, 24000));
  ASSERT_EQ(wav.size(), 44u + 48000u);
  EXPECT_EQ(wav.substr(0, 4), "RIFF");
  EXPECT_EQ(le32(wav, 4), 36u + 48000u);
  EXPECT_EQ(wav.substr(8, 8), "WAVEfmt ");
  EXPECT_EQ(le32(wav, 24), 24000u);      // sample rate
  EXPECT_EQ(le32(wav, 28), 48000u);      // byte rate
  EXPECT_EQ(wav.substr(36, 4), "data");
  EXPECT_EQ(le32(wav, 40), 48000u);
}

TEST(Wav, EmptyWaveform) {
  const std::string wav = encode_wav(Waveform{});
  EXPECT_EQ(wav.size(), 44u);
  EXPECT_EQ(le32(wav, 40), 0u);
  EXPECT_TRUE(decode_wav(wav).empty());
}

TEST(Wav, ClipsAndRoundTrips) {
  Waveform w = constant(4, 0.0f, 16000);
  w.samples = {1.5f, -2.0f, 0.5f, -0.25f};
  const std::string wav = encode_wav(w);
  const auto s0 = static_cast<std::int16_t>(static_cast<unsigned char>(wav[44]) | (static_cast<unsigned char>(wav[45]) << 8));
  EXPECT_EQ(s0, 32767);
  const Waveform back = decode_wav(wav);
  EXPECT_EQ(back.sample_rate, 16000);
  ASSERT_EQ(back.size(), 4u);
  EXPECT_FLOAT_EQ(back.samples[0], 1.0f);
  EXPECT_FLOAT_EQ(back.samples[1], -1.0f);
  EXPECT_NEAR(back.samples[2], 0.5f, 1.0 / 32767);
  EXPECT_THROW(decode_wav("RIFFjunk"), Error);
}

TEST(Resample, LengthAndIdentity) {
  const Waveform w = constant(22050, 0.25f, 22050);
  const Waveform up = resample_linear(w, 24000);
  EXPECT_EQ(up.size(), 24000u);
  EXPECT_EQ(up.sample_rate, 24000);
  EXPECT_FLOAT_EQ(up.samples[12345], 0.25f);
  EXPECT_EQ(resample_linear(w, 22050).samples, w.samples);
}

TEST(EncodeChapterAudio, WavFallback) {
  testing::ScratchDir dir;
  const EncodedAudio a = encode_chapter_audio(constant(100, 0.1f, 24000), dir / "ch1", std::nullopt, "chapter 1");
  EXPECT_EQ(a.media_type, "audio/wav");
  EXPECT_EQ(a.extension, ".wav");
  EXPECT_EQ(decode_wav(read_file(a.path)).size(), 100u);
}

TEST(EncodeChapterAudio, ExternalEncoder) {
  testing::ScratchDir dir;
  const EncodedAudio a =
      encode_chapter_audio(constant(100, 0.1f, 24000), dir / "ch 1", testing::stub_encoder(), "chapter 1");
  EXPECT_EQ(a.media_type, "audio/mpeg");
  EXPECT_EQ(a.extension, ".mp3");
  ASSERT_TRUE(std::filesystem::exists(a.path));
  EXPECT_EQ(read_file(a.path).substr(0, 3), "ID3");
}

TEST(EncodeChapterAudio, EncoderFailureNamesChapter) {
  testing::ScratchDir dir;
  for (const std::string cmd : {"exit 1", "true"}) {
    try {
      encode_chapter_audio(constant(100, 0.1f, 24000), dir / "c", cmd, "chapter 7 (text/c7.xhtml)");
      FAIL() << cmd;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EncoderFailure);
      EXPECT_NE(std::string(e.what()).find("chapter 7"), std::string::npos);
    }
  }
}

}  // namespace
}  // namespace narrate
