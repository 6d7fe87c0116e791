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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "narrate/drift.hpp"
#include "narrate/segmenter.hpp"
#include "narrate/stitcher.hpp"
#include "narrate/synth.hpp"

namespace {

std::string prose(std::size_t sentences) {
  std::string s;
  for (std::size_t i = 0; i < sentences; ++i) {
    s += "Mr. Finch walked " + std::to_string(i) + " miles, e.g. past the mill; then he rested. ";
  }
  return s;
}

void BM_InjectAnchors(benchmark::State& state) {
  std::string body;
  for (int p = 0; p < state.range(0); ++p) body += "<p>" + prose(8) + "<em>Quietly.</em></p>\n";
  const std::string xhtml = "<?xml version=\"1.0\"?><html xmlns=\"http://www.w3.org/1999/xhtml\"><head>"
                            "<title>t</title></head><body>" + body + "</body></html>";
  for (auto _ : state) benchmark::DoNotOptimize(narrate::inject_anchors(xhtml, 0));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * xhtml.size()));
}
BENCHMARK(BM_InjectAnchors)->Arg(10)->Arg(100);

void BM_SplitText(benchmark::State& state) {
  const std::string text = prose(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(narrate::split_text(text, 200));
}
BENCHMARK(BM_SplitText)->Arg(4)->Arg(64);

void BM_Stitch(benchmark::State& state) {
  std::vector<narrate::Waveform> units(static_cast<std::size_t>(state.range(0)),
                                       narrate::Waveform{std::vector<float>(72000, 0.1f), 24000});
  const narrate::StitchParams params;
  for (auto _ : state) benchmark::DoNotOptimize(narrate::stitch(units, params));
}
BENCHMARK(BM_Stitch)->Arg(10)->Arg(100);

void BM_Summarize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist(0.0, 0.1);
  std::vector<narrate::DriftSample> samples(static_cast<std::size_t>(state.range(0)));
  for (auto& s : samples) s.drift_s = dist(rng);
  for (auto _ : state) benchmark::DoNotOptimize(narrate::summarize(samples));
}
BENCHMARK(BM_Summarize)->Arg(1000)->Arg(100000);

}  // namespace
