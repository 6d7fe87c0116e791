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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace narrate {

class ContainerModel;

inline constexpr double kDriftWindowLow = -0.050;
inline constexpr double kDriftWindowHigh = 0.150;

// Negative drift means the highlight lagged behind the audio.
bool drift_acceptable(double drift_s);

struct SyncRecord {
  std::size_t chapter_index = 0;  // spine position of the narrated XHTML
  std::string par_id;
  std::string sentence_text;  // normalized text of the referenced element
  double t_start = 0.0;
};

// Every par of every media overlay, in spine then par order. Throws
// NoOverlays when no spine item has a media-overlay and BrokenTextRef when
// a par's text src does not resolve.
std::vector<SyncRecord> extract_sync_map(const ContainerModel& epub);
std::vector<SyncRecord> extract_sync_map(const std::filesystem::path& epub);

struct SentencePair {
  std::size_t reference = 0;  // indices into the two maps
  std::size_t candidate = 0;
};

struct MatchResult {
  std::vector<SentencePair> pairs;
  double match_rate = 0.0;  // pairs / reference records
};

// In-order matching of equal sentence text within each chapter. Pairs form
// a longest common subsequence of the two chapters' sentence sequences;
// among equally long ones the earliest candidate is taken, so repeated
// sentences pair positionally.
MatchResult match_sentences(std::span<const SyncRecord> reference,
                            std::span<const SyncRecord> candidate);

struct DriftSample {
  std::string sentence_text;
  std::size_t chapter_index = 0;
  double drift_s = 0.0;  // reference t_start - candidate t_start
  bool acceptable = false;
};

std::vector<DriftSample> drift_samples(std::span<const SyncRecord> reference,
                                       std::span<const SyncRecord> candidate,
                                       const MatchResult& match);

struct DriftReport {
  std::size_t n_matched = 0;
  double match_rate = 0.0;
  double min = 0.0;
  double p10 = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  double pct_acceptable = 0.0;  // fraction in [0, 1]
};

// Linear interpolation between order statistics (h = (n-1)p).
double quantile(std::vector<double> values, double p);

// Throws EmptyInput for no samples. match_rate is left at 0 for the caller.
DriftReport summarize(std::span<const DriftSample> samples);

struct DriftEvaluation {
  std::vector<SyncRecord> reference;
  std::vector<SyncRecord> candidate;
  MatchResult match;
  std::vector<DriftSample> samples;
  DriftReport report;
};

DriftEvaluation evaluate_drift(const std::filesystem::path& reference,
                               const std::filesystem::path& candidate);

std::string drift_csv(std::span<const DriftSample> samples);
std::string drift_json(const DriftReport& report);
// Either path may be empty to skip that export. Throws IoFailure.
void export_report(const DriftReport& report, std::span<const DriftSample> samples,
                   const std::filesystem::path& csv_path, const std::filesystem::path& json_path);

std::string format_report_header();
std::string format_report_row(const std::string& label, const DriftReport& report);

}  // namespace narrate
