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

#include "cli.hpp"

#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "narrate/drift.hpp"
#include "narrate/error.hpp"
#include "narrate/pipeline.hpp"

namespace narrate::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

// One line: "narrate: error[<Code>]: <message>".
void print_error(std::ostream& err, std::string_view code, std::string_view message) {
  std::string flat(message);
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << "narrate: error[" << code << "]: " << flat << '\n';
}

std::filesystem::path default_output(const std::filesystem::path& input) {
  std::filesystem::path out = input;
  out.replace_filename(input.stem().string() + ".overlay.epub");
  return out;
}

void print_defaults(std::ostream& err, const RunConfig& c) {
  err << "narrate " << kVersion << ": engine=" << (c.skip_audio ? std::string("mock (skip-audio)") : c.engine)
      << " language=" << c.language << " max_chars=" << c.lambda_plus << " min_chars=" << c.lambda_minus
      << " delta=" << c.delta_s << "s fade=" << c.fade_ms << "ms\n";
}

int convert(const RunConfig& config, std::ostream& out, std::ostream& err) {
  print_defaults(err, config);
  const ConvertResult result = run_convert(config, [&err](const std::string& line) { err << line << '\n'; });
  out << config.output_epub.string() << ": " << result.chapters.size() << " chapters, " << result.sentences
      << " sentences, " << format_clock(result.total_duration) << '\n';
  return kExitOk;
}

int drift(const std::string& reference, const std::string& candidate, const std::string& csv,
          const std::string& json, std::ostream& out) {
  const DriftEvaluation ev = evaluate_drift(reference, candidate);
  export_report(ev.report, ev.samples, csv, json);
  out << format_report_header() << '\n' << format_report_row("candidate", ev.report) << '\n';
  out << "matched " << ev.report.n_matched << " of " << ev.reference.size() << " reference sentences\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile EPUBs into EPUB 3 Media Overlay audiobooks and measure sync drift", "narrate"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig config;
  std::string voice;
  std::string output;
  std::size_t probe = 0;
  std::string encoder;
  CLI::App* conv = app.add_subcommand("convert", "Narrate an EPUB and add media overlays");
  conv->add_option("input", config.input_epub, "Input EPUB")->required();
  conv->add_option("--voice", voice, "Reference voice sample (WAV)");
  conv->add_option("-o,--output", output, "Output EPUB (default: <input>.overlay.epub)");
  conv->add_option("--language", config.language, "BCP-47 language code")->capture_default_str();
  conv->add_flag("--gpu", config.gpu, "Ask the TTS bridge to use the GPU (TTS_USE_GPU=1)");
  conv->add_flag("--skip-audio", config.skip_audio, "Use placeholder audio instead of running TTS");
  conv->add_option("--engine", config.engine, "\"mock\" or a TTS bridge command line")->capture_default_str();
  conv->add_option("--delta", config.delta_s, "Silence after each sentence, seconds")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  conv->add_option("--fade-ms", config.fade_ms, "Fade-out at the end of each sentence, ms")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  conv->add_option("--max-chars", config.lambda_plus, "Split units longer than this")->capture_default_str();
  conv->add_option("--min-chars", config.lambda_minus, "Merge units shorter than this")->capture_default_str();
  conv->add_option("--jobs", config.jobs, "Chapters narrated in parallel (0: all processors)")
      ->capture_default_str();
  conv->add_option("--encoder", encoder, "MP3 encoder command template using {in} and {out}");
  conv->add_option("--mock-overflow", probe, "Mock engine overflows above this many characters")
      ->check(CLI::PositiveNumber);

  std::string reference;
  std::string candidate;
  std::string csv;
  std::string json;
  CLI::App* dr = app.add_subcommand("drift", "Compare the sync maps of two media-overlay EPUBs");
  dr->add_option("reference", reference, "Reference EPUB")->required();
  dr->add_option("candidate", candidate, "Candidate EPUB")->required();
  dr->add_option("--csv", csv, "Per-sentence CSV export");
  dr->add_option("--json", json, "Summary JSON export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, "Usage", e.what());
    return kExitUsage;
  }

  try {
    if (*conv) {
      if (!voice.empty()) config.voice = voice;
      if (!encoder.empty()) config.encoder = encoder;
      if (probe != 0) config.hard_token_probe = probe;
      config.output_epub = output.empty() ? default_output(config.input_epub) : std::filesystem::path(output);
      return convert(config, out, err);
    }
    return drift(reference, candidate, csv, json, out);
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what());
    return e.code() == ErrorCode::InvalidConfig ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    print_error(err, "Internal", e.what());
    return kExitRuntime;
  }
}

}  // namespace narrate::cli
