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

#include "narrate/drift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/overlay.hpp"
#include "narrate/package.hpp"
#include "narrate/segmenter.hpp"
#include "narrate/sentences.hpp"
#include "narrate/xml.hpp"

namespace narrate {
namespace {

constexpr double kWindowEpsilon = 1e-9;

const xml::Node* first_child_element(const xml::Node& node, std::string_view local) {
  for (const auto& c : node.children()) {
    if (c->is_element() && c->local_name() == local) return c.get();
  }
  return nullptr;
}

std::string fragment_of(std::string_view href) {
  const auto hash = href.find('#');
  if (hash == std::string_view::npos) return {};
  return archive_path::percent_decode(href.substr(hash + 1));
}

class SyncMapExtractor {
 public:
  explicit SyncMapExtractor(const ContainerModel& epub) : epub_(epub), pkg_(parse_package(epub)) {}

  std::vector<SyncRecord> run() {
    std::vector<SyncRecord> out;
    bool any = false;
    for (std::size_t pos = 0; pos < pkg_.spine.size(); ++pos) {
      const ManifestItem* item = pkg_.item(pkg_.spine[pos]);
      if (item == nullptr || !item->media_overlay) continue;
      const ManifestItem* smil = pkg_.item(*item->media_overlay);
      if (smil == nullptr) continue;
      any = true;
      read_smil(pos, pkg_.resolve(*smil), out);
    }
    if (!any) throw Error(ErrorCode::NoOverlays, "no spine item has a media overlay");
    return out;
  }

 private:
  void read_smil(std::size_t chapter, const std::string& smil_path, std::vector<SyncRecord>& out) {
    const std::string* bytes = epub_.find(smil_path);
    if (bytes == nullptr) throw Error(ErrorCode::NoOverlays, "missing SMIL document " + smil_path);
    xml::Document smil;
    try {
      smil = xml::parse(*bytes);
    } catch (const xml::ParseError& e) {
      throw Error(ErrorCode::NoOverlays, smil_path + ": " + e.what());
    }
    const std::string base = archive_path::directory(smil_path);
    smil.root().walk([&](xml::Node& n) {
      if (!n.is_element() || n.local_name() != "par") return true;
      const std::string par_id = n.attribute("id").value_or("");
      const xml::Node* text = first_child_element(n, "text");
      const xml::Node* audio = first_child_element(n, "audio");
      const std::string src = text ? text->attribute("src").value_or("") : "";
      const std::string fragment = fragment_of(src);
      if (fragment.empty()) throw broken(par_id, src);
      const xml::Node* target = lookup(archive_path::resolve(base, src), fragment);
      if (target == nullptr) throw broken(par_id, src);
      SyncRecord r;
      r.chapter_index = chapter;
      r.par_id = par_id;
      r.sentence_text = normalize_text(xml::text_content(*target));
      const auto begin = audio ? audio->attribute("clipBegin") : std::nullopt;
      r.t_start = begin ? parse_clock(*begin) : 0.0;
      out.push_back(std::move(r));
      return false;
    });
  }

  static Error broken(const std::string& par_id, const std::string& src) {
    return Error(ErrorCode::BrokenTextRef,
                 "par " + (par_id.empty() ? std::string("(no id)") : par_id) + " references " + src);
  }

  const xml::Node* lookup(const std::string& path, const std::string& id) {
    auto it = docs_.find(path);
    if (it == docs_.end()) {
      const std::string* bytes = epub_.find(path);
      if (bytes == nullptr) return nullptr;
      it = docs_.emplace(path, parse_xhtml(*bytes)).first;
    }
    return it->second.root().find_by_id(id);
  }

  const ContainerModel& epub_;
  PackageDoc pkg_;
  std::unordered_map<std::string, xml::Document> docs_;
};

// Pairs within one chapter; `ref` and `cand` hold indices into the maps.
void match_chapter(std::span<const SyncRecord> reference, std::span<const SyncRecord> candidate,
                   const std::vector<std::size_t>& ref, const std::vector<std::size_t>& cand,
                   std::vector<SentencePair>& out) {
  const std::size_t n = ref.size();
  const std::size_t m = cand.size();
  // Suffix table: best[i][j] = LCS length of ref[i..] and cand[j..].
  std::vector<std::uint32_t> best((n + 1) * (m + 1), 0);
  const auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      if (reference[ref[i]].sentence_text == candidate[cand[j]].sentence_text) {
        best[at(i, j)] = best[at(i + 1, j + 1)] + 1;
      } else {
        best[at(i, j)] = std::max(best[at(i + 1, j)], best[at(i, j + 1)]);
      }
    }
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (reference[ref[i]].sentence_text == candidate[cand[j]].sentence_text &&
        best[at(i, j)] == best[at(i + 1, j + 1)] + 1) {
      out.push_back({ref[i], cand[j]});
      ++i;
      ++j;
    } else if (best[at(i, j + 1)] >= best[at(i + 1, j)]) {
      ++j;
    } else {
      ++i;
    }
  }
}

std::string csv_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fixed(double v, int digits) {
  if (v == 0.0) v = 0.0;  // print -0 as 0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

bool drift_acceptable(double drift_s) {
  return drift_s >= kDriftWindowLow - kWindowEpsilon && drift_s <= kDriftWindowHigh + kWindowEpsilon;
}

std::vector<SyncRecord> extract_sync_map(const ContainerModel& epub) {
  return SyncMapExtractor(epub).run();
}

std::vector<SyncRecord> extract_sync_map(const std::filesystem::path& epub) {
  try {
    return extract_sync_map(open_container(epub));
  } catch (const Error& e) {
    rethrow_with_context(e, epub.string());
  }
}

MatchResult match_sentences(std::span<const SyncRecord> reference,
                            std::span<const SyncRecord> candidate) {
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> chapters;
  for (std::size_t i = 0; i < reference.size(); ++i) chapters[reference[i].chapter_index].first.push_back(i);
  for (std::size_t j = 0; j < candidate.size(); ++j) chapters[candidate[j].chapter_index].second.push_back(j);
  MatchResult result;
  for (const auto& [chapter, idx] : chapters) {
    match_chapter(reference, candidate, idx.first, idx.second, result.pairs);
  }
  result.match_rate = reference.empty()
                          ? 0.0
                          : static_cast<double>(result.pairs.size()) / static_cast<double>(reference.size());
  return result;
}

std::vector<DriftSample> drift_samples(std::span<const SyncRecord> reference,
                                       std::span<const SyncRecord> candidate,
                                       const MatchResult& match) {
  std::vector<DriftSample> out;
  out.reserve(match.pairs.size());
  for (const auto& p : match.pairs) {
    const SyncRecord& r = reference[p.reference];
    DriftSample s;
    s.sentence_text = r.sentence_text;
    s.chapter_index = r.chapter_index;
    s.drift_s = r.t_start - candidate[p.candidate].t_start;
    s.acceptable = drift_acceptable(s.drift_s);
    out.push_back(std::move(s));
  }
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return a + frac * (b - a);
}

DriftReport summarize(std::span<const DriftSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no matched sentences to summarize");
  std::vector<double> d;
  d.reserve(samples.size());
  double sum = 0.0;
  std::size_t ok = 0;
  for (const auto& s : samples) {
    d.push_back(s.drift_s);
    sum += s.drift_s;
    if (drift_acceptable(s.drift_s)) ++ok;
  }
  DriftReport r;
  r.n_matched = samples.size();
  r.min = *std::min_element(d.begin(), d.end());
  r.max = *std::max_element(d.begin(), d.end());
  r.mean = sum / static_cast<double>(d.size());
  r.p10 = quantile(d, 0.10);
  r.median = quantile(d, 0.50);
  r.p90 = quantile(d, 0.90);
  r.pct_acceptable = static_cast<double>(ok) / static_cast<double>(d.size());
  return r;
}

DriftEvaluation evaluate_drift(const std::filesystem::path& reference,
                               const std::filesystem::path& candidate) {
  DriftEvaluation ev;
  ev.reference = extract_sync_map(reference);
  ev.candidate = extract_sync_map(candidate);
  ev.match = match_sentences(ev.reference, ev.candidate);
  ev.samples = drift_samples(ev.reference, ev.candidate, ev.match);
  ev.report = summarize(ev.samples);
  ev.report.match_rate = ev.match.match_rate;
  return ev;
}

std::string drift_csv(std::span<const DriftSample> samples) {
  std::string out = "chapter,text,drift_s,acceptable\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.9g", s.drift_s);
    out += std::to_string(s.chapter_index) + "," + csv_quote(s.sentence_text) + "," + buf + "," +
           (s.acceptable ? "true" : "false") + "\n";
  }
  return out;
}

std::string drift_json(const DriftReport& r) {
  const nlohmann::ordered_json j = {
      {"n_matched", r.n_matched}, {"match_rate", r.match_rate}, {"min", r.min},
      {"p10", r.p10},             {"mean", r.mean},             {"median", r.median},
      {"p90", r.p90},             {"max", r.max},               {"pct_acceptable", r.pct_acceptable},
  };
  return j.dump(2) + "\n";
}

void export_report(const DriftReport& report, std::span<const DriftSample> samples,
                   const std::filesystem::path& csv_path, const std::filesystem::path& json_path) {
  if (!csv_path.empty()) write_file(csv_path, drift_csv(samples));
  if (!json_path.empty()) write_file(json_path, drift_json(report));
}

std::string format_report_header() {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s %8s %8s %8s %8s %8s", "method", "min", "p10",
                "mean", "median", "p90", "max", "window%", "matched%");
  return buf;
}

std::string format_report_row(const std::string& label, const DriftReport& r) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s %8s %8s %8s %8s %8s", label.c_str(),
                fixed(r.min, 3).c_str(), fixed(r.p10, 3).c_str(), fixed(r.mean, 3).c_str(),
                fixed(r.median, 3).c_str(), fixed(r.p90, 3).c_str(), fixed(r.max, 3).c_str(),
                fixed(100.0 * r.pct_acceptable, 1).c_str(), fixed(100.0 * r.match_rate, 1).c_str());
  return buf;
}

}  // namespace narrate
