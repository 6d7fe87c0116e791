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

#include "narrate/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <unistd.h>

#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/package.hpp"
#include "narrate/segmenter.hpp"
#include "narrate/sentences.hpp"
#include "narrate/stitcher.hpp"
#include "narrate/synth.hpp"

namespace narrate {
namespace fs = std::filesystem;
namespace {

struct ChapterJob {
  std::size_t spine_pos = 0;
  std::string xhtml_path;
  std::string smil_path;
  std::string audio_stem;  // archive path without extension
  std::vector<SentenceSeg> segments;
  std::string xhtml;  // rewritten document
  // Filled by the worker.
  ChapterResult result;
  std::string audio_bytes;
  std::string audio_media_type;
  std::exception_ptr error;
};

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("narrate-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Picks "<dir><stem><suffix>" not yet taken, adding _2, _3, ... to the stem.
std::string claim_path(std::set<std::string>& taken, const std::string& dir, const std::string& stem,
                       const std::string& suffix) {
  std::string candidate = dir + stem + suffix;
  for (int n = 2; taken.count(candidate) != 0; ++n) {
    candidate = dir + stem + "_" + std::to_string(n) + suffix;
  }
  taken.insert(candidate);
  return candidate;
}

std::string chapter_label(const ChapterJob& job) {
  return "chapter " + std::to_string(job.spine_pos + 1) + " (" + job.xhtml_path + ")";
}

void narrate_chapter(ChapterJob& job, SpeechEngine& engine, const RunConfig& config,
                     const fs::path& scratch) {
  EngineLimits limits;
  limits.lambda_plus = config.lambda_plus;
  limits.lambda_minus = config.lambda_minus;
  limits.hard_token_probe = config.hard_token_probe;
  SynthOptions options;
  options.language = config.language;
  options.voice_ref = config.voice ? config.voice->string() : std::string();

  const std::vector<UnitPlan> plans = plan_units(job.segments, limits);
  std::vector<SynthUnit> units;
  units.reserve(plans.size());
  for (const auto& plan : plans) units.push_back(synthesize_unit(plan, engine, options));

  StitchParams params;
  params.fade_ms = config.fade_ms;
  params.delta_s = config.delta_s;
  params.sample_rate = engine.sample_rate();
  StitchedChapter stitched = stitch(units, params);

  ChapterResult& r = job.result;
  r.chapter_index = job.spine_pos;
  r.xhtml_path = job.xhtml_path;
  r.smil_path = job.smil_path;
  r.sentences = job.segments.size();
  for (const auto& plan : plans) r.unit_anchors.push_back(plan.anchor_ids);
  r.intervals = compute_intervals(stitched, r.unit_anchors);
  r.unit_samples = stitched.unit_samples;
  r.pad_samples = stitched.pad_samples;
  r.sample_rate = stitched.audio.sample_rate;
  r.unit_durations = stitched.unit_durations;
  r.delta_s = stitched.delta_s;
  r.duration = r.intervals.back().t_end;

  if (config.encoder) {
    const fs::path stem = scratch / ("chapter_" + std::to_string(job.spine_pos + 1));
    const EncodedAudio encoded = encode_chapter_audio(stitched.audio, stem, config.encoder, chapter_label(job));
    job.audio_bytes = read_file(encoded.path);
    job.audio_media_type = encoded.media_type;
    r.audio_path = job.audio_stem + encoded.extension;
  } else {
    job.audio_bytes = encode_wav(stitched.audio);
    job.audio_media_type = "audio/wav";
    r.audio_path = job.audio_stem + ".wav";
  }
}

void run_jobs(std::vector<ChapterJob>& jobs, const RunConfig& config, const ProgressFn& progress,
              const fs::path& scratch) {
  unsigned workers = config.jobs != 0 ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex progress_mutex;
  const auto report = [&](const std::string& line) {
    if (!progress) return;
    const std::lock_guard lock(progress_mutex);
    progress(line);
  };

  const auto worker = [&] {
    std::unique_ptr<SpeechEngine> engine;
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size() || failed.load()) return;
      ChapterJob& job = jobs[k];
      try {
        if (!engine) engine = make_engine(config);
        narrate_chapter(job, *engine, config, scratch);
        report("narrated " + chapter_label(job) + ": " + std::to_string(job.segments.size()) +
               " sentences, " + format_clock(job.result.duration));
      } catch (...) {
        job.error = std::current_exception();
        failed.store(true);
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (auto& job : jobs) {
    if (!job.error) continue;
    try {
      std::rethrow_exception(job.error);
    } catch (const Error& e) {
      rethrow_with_context(e, chapter_label(job));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IoFailure, chapter_label(job) + ": " + e.what());
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  const auto bad = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
  if (input_epub.empty()) bad("no input EPUB given");
  if (output_epub.empty()) bad("no output path given");
  if (fs::weakly_canonical(input_epub) == fs::weakly_canonical(output_epub)) {
    bad("output path must differ from the input " + input_epub.string());
  }
  if (!uses_mock() && !voice) bad("--voice is required unless the mock engine or --skip-audio is used");
  if (voice && !uses_mock() && !fs::exists(*voice)) bad("voice sample not found: " + voice->string());
  if (engine.empty()) bad("empty engine command");
  if (language.empty()) bad("empty language code");
  EngineLimits limits;
  limits.lambda_plus = lambda_plus;
  limits.lambda_minus = lambda_minus;
  limits.validate();
  StitchParams params;
  params.fade_ms = fade_ms;
  params.delta_s = delta_s;
  params.validate();
}

std::unique_ptr<SpeechEngine> make_engine(const RunConfig& config) {
  if (config.uses_mock()) return std::make_unique<MockEngine>(config.hard_token_probe);
  return std::make_unique<SubprocessEngine>(SubprocessEngine::Options{config.engine, config.gpu});
}

ConvertResult run_convert(const RunConfig& config, const ProgressFn& progress) {
  config.validate();
  ContainerModel model = open_container(config.input_epub);
  const PackageDoc pkg = parse_package(model);
  const std::string opf_dir = pkg.opf_directory();
  const std::string original_opf = model.bytes(model.opf_path());
  const AbbreviationList abbreviations = AbbreviationList::for_language(config.language);

  std::set<std::string> taken;
  for (const auto& p : model.paths()) taken.insert(p);
  const std::string css_path = claim_path(taken, opf_dir + "css/", "media-overlay", ".css");

  // Phase 1: segmentation and anchor injection.
  std::vector<ChapterJob> jobs;
  std::set<std::string> seen;
  for (std::size_t pos = 0; pos < pkg.spine.size(); ++pos) {
    const ManifestItem* item = pkg.item(pkg.spine[pos]);
    if (item == nullptr || item->media_type != kXhtmlMediaType) continue;
    const std::string path = pkg.resolve(*item);
    if (!seen.insert(path).second || !model.contains(path)) continue;
    ChapterJob job;
    job.spine_pos = pos;
    job.xhtml_path = path;
    try {
      xml::Document doc = parse_xhtml(model.bytes(path));
      job.segments = inject_anchors(doc, pos, abbreviations);
      if (job.segments.empty()) continue;
      link_stylesheet(doc, archive_path::href(archive_path::directory(path), css_path));
      job.xhtml = xml::serialize(doc);
    } catch (const Error& e) {
      rethrow_with_context(e, chapter_label(job));
    }
    const std::string stem = archive_path::stem(path);
    job.smil_path = claim_path(taken, opf_dir + "smil/", stem, ".smil");
    job.audio_stem = claim_path(taken, opf_dir + "audio/", stem, "");
    taken.insert(job.audio_stem + ".wav");
    taken.insert(job.audio_stem + ".mp3");
    if (progress) {
      progress("segmented " + chapter_label(job) + ": " + std::to_string(job.segments.size()) + " sentences");
    }
    jobs.push_back(std::move(job));
  }
  if (jobs.empty()) throw Error(ErrorCode::EmptyChapter, "no narratable text in " + config.input_epub.string());

  // Phase 2: synthesis, stitching and timing.
  const TempDir scratch;
  run_jobs(jobs, config, progress, scratch.path());

  // Phase 3: overlays and packaging.
  ConvertResult result;
  OverlayBundle bundle;
  bundle.css_path = css_path;
  for (auto& job : jobs) {
    ChapterOverlay ch;
    ch.chapter_index = job.spine_pos;
    ch.xhtml_path = job.xhtml_path;
    ch.smil_path = job.smil_path;
    ch.audio_path = job.result.audio_path;
    ch.audio_media_type = job.audio_media_type;
    const std::string smil_dir = archive_path::directory(job.smil_path);
    ch.smil.textref = archive_path::href(smil_dir, job.xhtml_path);
    ch.smil.audio_src = archive_path::href(smil_dir, ch.audio_path);
    ch.smil.pars = job.result.intervals;
    ch.smil.total_duration = job.result.duration;
    bundle.total_duration += job.result.duration;

    model.put(job.xhtml_path, std::move(job.xhtml));
    model.put(job.smil_path, emit_smil(ch.smil));
    model.put(ch.audio_path, std::move(job.audio_bytes));
    bundle.chapters.push_back(std::move(ch));
    result.sentences += job.result.sentences;
    result.chapters.push_back(std::move(job.result));
  }
  result.total_duration = bundle.total_duration;
  model.put(css_path, emit_css(bundle.active_class));
  model.put(model.opf_path(), render_package(original_opf, update_package(pkg, bundle)));

  fs::path partial = config.output_epub;
  partial += ".partial";
  write_container(model, partial);
  std::error_code ec;
  fs::rename(partial, config.output_epub, ec);
  if (ec) {
    fs::remove(partial, ec);
    throw Error(ErrorCode::IoFailure, "cannot write " + config.output_epub.string());
  }
  if (progress) progress("wrote " + config.output_epub.string());
  return result;
}

}  // namespace narrate
