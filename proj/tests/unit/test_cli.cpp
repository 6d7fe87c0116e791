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

#include <sstream>

#include "cli.hpp"
#include "narrate/container.hpp"
#include "test_support.hpp"

namespace narrate {
namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "narrate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Cli, ConvertPrintsDefaultsAndSucceeds) {
  testing::ScratchDir dir;
  const std::string out = (dir / "o.epub").string();
  const Outcome r = run({"convert", testing::fixture("minimal.epub").string(), "--output", out, "--jobs", "1"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("max_chars=200 min_chars=60 delta=0.15s fade=50ms"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("narrated chapter 1"), std::string::npos);
  EXPECT_NO_THROW(open_container(out));
}

TEST(Cli, FlagsOverrideDefaults) {
  testing::ScratchDir dir;
  const Outcome r = run({"convert", testing::fixture("minimal.epub").string(), "-o", (dir / "o.epub").string(),
                         "--delta", "0.3", "--fade-ms", "10", "--max-chars", "120", "--min-chars", "20",
                         "--language", "de", "--skip-audio", "--gpu"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("language=de max_chars=120 min_chars=20 delta=0.3s fade=10ms"), std::string::npos) << r.err;
}

TEST(Cli, DriftSelfComparisonPrintsZeroRow) {
  testing::ScratchDir dir;
  const std::string out = (dir / "o.epub").string();
  ASSERT_EQ(run({"convert", testing::fixture("two_spine.epub").string(), "-o", out}).status, 0);
  const Outcome r = run({"drift", out, out, "--csv", (dir / "d.csv").string(), "--json", (dir / "d.json").string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("candidate       0.000    0.000    0.000    0.000    0.000    0.000    100.0    100.0"),
            std::string::npos)
      << r.out;
  EXPECT_TRUE(std::filesystem::exists(dir / "d.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "d.json"));
}

TEST(Cli, DriftAgainstShiftedCandidate) {
  testing::ScratchDir dir;
  const std::string ref = (dir / "ref.epub").string();
  ASSERT_EQ(run({"convert", testing::fixture("styled.epub").string(), "-o", ref}).status, 0);
  ContainerModel cand = open_container(ref);
  testing::shift_clips(cand, 0.2);
  write_container(cand, dir / "cand.epub");
  const Outcome r = run({"drift", ref, (dir / "cand.epub").string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("-0.200"), std::string::npos) << r.out;
}

TEST(Cli, DriftOnEpub2IsNoOverlays) {
  const std::string e2 = testing::fixture("epub2.epub").string();
  const Outcome r = run({"drift", e2, e2});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(lines(r.err), 1u);
  EXPECT_EQ(r.err.rfind("narrate: error[NoOverlays]: ", 0), 0u) << r.err;
}

TEST(Cli, MissingInputIsRuntimeFailure) {
  const Outcome r = run({"convert", "/nonexistent/book.epub", "-o", "/tmp/narrate-never.epub"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error[IoFailure]: cannot open /nonexistent/book.epub"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"convert"}).status, 2);
  EXPECT_EQ(run({"convert", "a.epub", "--delta", "-1"}).status, 2);
  EXPECT_EQ(run({"convert", "a.epub", "--bogus"}).status, 2);
  EXPECT_EQ(run({"drift", "only-one.epub"}).status, 2);
  const Outcome same = run({"convert", "a.epub", "-o", "a.epub"});
  EXPECT_EQ(same.status, 2);
  EXPECT_NE(same.err.find("error[InvalidConfig]"), std::string::npos);
  EXPECT_EQ(run({"convert", "a.epub", "--engine", "python3 bridge.py"}).status, 2);
}

TEST(Cli, HelpAndVersion) {
  const Outcome help = run({"--help"});
  EXPECT_EQ(help.status, 0);
  EXPECT_NE(help.out.find("convert"), std::string::npos);
  EXPECT_EQ(run({"--version"}).status, 0);
}

}  // namespace
}  // namespace narrate
