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

#include "narrate/overlay.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "narrate/container.hpp"
#include "narrate/error.hpp"
#include "narrate/stitcher.hpp"

namespace narrate {
namespace {

[[noreturn]] void violation(const std::string& why) {
  throw Error(ErrorCode::InvariantViolation, "media overlay: " + why);
}

std::vector<ClipInterval> build_intervals(std::span<const double> starts, double end,
                                          std::span<const std::vector<std::string>> anchors) {
  std::vector<ClipInterval> out;
  out.reserve(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    ClipInterval iv;
    if (anchors[k].empty()) violation("synthesis unit without an anchor");
    iv.anchor_id = anchors[k].front();
    iv.covered = anchors[k];
    iv.t_start = starts[k];
    iv.t_end = k + 1 < starts.size() ? starts[k + 1] : end;
    out.push_back(std::move(iv));
  }
  return out;
}

std::string two_digit(std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02zu", n);
  return buf;
}

bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && out >= 0.0;
}

}  // namespace

std::vector<ClipInterval> compute_intervals(std::span<const double> unit_durations, double delta_s,
                                            std::span<const std::vector<std::string>> anchors) {
  if (unit_durations.empty()) throw Error(ErrorCode::EmptyChapter, "chapter has no synthesized units");
  if (unit_durations.size() != anchors.size()) violation("durations and anchors differ in length");
  std::vector<double> starts(unit_durations.size());
  double t = 0.0;
  for (std::size_t k = 0; k < unit_durations.size(); ++k) {
    starts[k] = t;
    t += unit_durations[k] + delta_s;
  }
  return build_intervals(starts, t, anchors);
}

std::vector<ClipInterval> compute_intervals(const StitchedChapter& chapter,
                                            std::span<const std::vector<std::string>> anchors) {
  if (chapter.unit_samples.empty()) {
    throw Error(ErrorCode::EmptyChapter, "chapter has no synthesized units");
  }
  if (chapter.unit_samples.size() != anchors.size()) violation("durations and anchors differ in length");
  std::vector<double> starts(chapter.unit_samples.size());
  std::size_t cursor = 0;
  const auto rate = static_cast<double>(chapter.audio.sample_rate);
  for (std::size_t k = 0; k < chapter.unit_samples.size(); ++k) {
    starts[k] = static_cast<double>(cursor) / rate;
    cursor += chapter.unit_samples[k] + chapter.pad_samples;
  }
  return build_intervals(starts, static_cast<double>(cursor) / rate, anchors);
}

std::string format_clock(double seconds) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) violation("negative or non-finite clock value");
  // The epsilon absorbs binary representation error of exact rational times
  // (k / sample_rate); it is far below the spacing of such values.
  const auto total_ms = static_cast<long long>(std::floor(seconds * 1000.0 + 1e-6));
  const long long ms = total_ms % 1000;
  const long long total_s = total_ms / 1000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld.%03lld", total_s / 3600, (total_s / 60) % 60,
                total_s % 60, ms);
  return buf;
}

double parse_clock(std::string_view clock) {
  std::string_view s = clock;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto bad = [&]() -> double { violation("unparseable clock value '" + std::string(clock) + "'"); };
  if (s.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
      const auto colon = s.find(':', start);
      parts.push_back(s.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 2 && parts.size() != 3) return bad();
    double value = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!parse_number(parts[i], value)) return bad();
      if (i + 1 < parts.size() && value != std::floor(value)) return bad();
      total = total * 60.0 + value;
    }
    return total;
  }
  struct Unit {
    std::string_view suffix;
    double scale;
  };
  static constexpr Unit kUnits[] = {{"ms", 0.001}, {"min", 60.0}, {"h", 3600.0}, {"s", 1.0}};
  for (const auto& u : kUnits) {
    if (s.size() > u.suffix.size() && s.substr(s.size() - u.suffix.size()) == u.suffix) {
      double value = 0.0;
      if (!parse_number(s.substr(0, s.size() - u.suffix.size()), value)) return bad();
      return value * u.scale;
    }
  }
  double value = 0.0;
  if (!parse_number(s, value)) return bad();
  return value;
}

void validate_smil(const SmilDoc& doc) {
  if (doc.pars.empty()) violation("SMIL document without pars");
  if (doc.pars.front().t_start != 0.0) violation("first par does not start at 0");
  for (std::size_t k = 0; k < doc.pars.size(); ++k) {
    const ClipInterval& p = doc.pars[k];
    if (!(p.t_start < p.t_end) || !(format_clock(p.t_start) < format_clock(p.t_end))) {
      violation("par " + p.anchor_id + " has zero or negative length");
    }
    if (k + 1 < doc.pars.size()) {
      const ClipInterval& next = doc.pars[k + 1];
      if (p.t_end != next.t_start || format_clock(p.t_end) != format_clock(next.t_start)) {
        violation("gap or overlap between " + p.anchor_id + " and " + next.anchor_id);
      }
    }
  }
  if (doc.total_duration != doc.pars.back().t_end) violation("total duration differs from the last clipEnd");
}

std::string emit_smil(const SmilDoc& doc) {
  validate_smil(doc);
  const std::string text_src = xml::escape_attribute(doc.textref);
  const std::string audio_src = xml::escape_attribute(doc.audio_src);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<smil xmlns=\"http://www.w3.org/ns/SMIL\" xmlns:epub=\"http://www.idpf.org/2007/ops\" version=\"3.0\">\n";
  out += "  <body>\n";
  out += "    <seq id=\"seq1\" epub:textref=\"" + text_src + "\">\n";
  for (const auto& p : doc.pars) {
    const std::string id = xml::escape_attribute(p.anchor_id);
    out += "      <par id=\"par_" + id + "\">\n";
    out += "        <text src=\"" + text_src + "#" + id + "\"/>\n";
    out += "        <audio src=\"" + audio_src + "\" clipBegin=\"" + format_clock(p.t_start) +
           "\" clipEnd=\"" + format_clock(p.t_end) + "\"/>\n";
    out += "      </par>\n";
  }
  out += "    </seq>\n";
  out += "  </body>\n";
  out += "</smil>\n";
  return out;
}

std::string emit_css(std::string_view active_class) {
  const std::string selector = "." + std::string(active_class);
  std::string out;
  out += "/* Media overlay highlight */\n";
  out += selector + " {\n  background-color: #ffeb3b;\n}\n\n";
  out += "@media (prefers-color-scheme: dark) {\n";
  out += "  " + selector + " {\n    background-color: #5e4b8b;\n  }\n";
  out += "}\n";
  return out;
}

PackageDoc update_package(const PackageDoc& pkg, const OverlayBundle& bundle) {
  PackageDoc out = pkg;
  if (out.version.empty() || out.version.front() < '3') out.version = "3.0";
  const std::string opf_dir = out.opf_directory();

  for (const auto& ch : bundle.chapters) {
    const ManifestItem* xhtml = out.item_at(ch.xhtml_path);
    if (xhtml == nullptr) {
      throw Error(ErrorCode::MissingChapterItem, "no manifest item for " + ch.xhtml_path);
    }
    const std::string xhtml_id = xhtml->id;
    const std::string suffix = two_digit(ch.chapter_index + 1);

    ManifestItem smil;
    smil.id = out.unique_id("smil_" + suffix);
    smil.href = archive_path::href(opf_dir, ch.smil_path);
    smil.media_type = std::string(kSmilMediaType);
    out.manifest.push_back(smil);

    ManifestItem audio;
    audio.id = out.unique_id("audio_" + suffix);
    audio.href = archive_path::href(opf_dir, ch.audio_path);
    audio.media_type = ch.audio_media_type;
    out.manifest.push_back(audio);

    out.item(xhtml_id)->media_overlay = smil.id;
    out.metadata.push_back({"media:duration", "#" + smil.id, format_clock(ch.smil.total_duration)});
  }
  out.metadata.push_back({"media:duration", std::nullopt, format_clock(bundle.total_duration)});
  out.metadata.push_back({"media:active-class", std::nullopt, bundle.active_class});

  ManifestItem css;
  css.id = out.unique_id("media_overlay_css");
  css.href = archive_path::href(opf_dir, bundle.css_path);
  css.media_type = std::string(kCssMediaType);
  out.manifest.push_back(css);
  return out;
}

void link_stylesheet(xml::Document& doc, std::string_view href) {
  xml::Node& html = doc.document_element();
  xml::Node* head = nullptr;
  for (const auto& child : html.children()) {
    if (child->is_element() && child->local_name() == "head") {
      head = child.get();
      break;
    }
  }
  const std::string prefix = html.name().find(':') != std::string::npos
                                 ? html.name().substr(0, html.name().find(':') + 1)
                                 : std::string();
  if (head == nullptr) {
    head = &html.insert_child(0, xml::make_element(prefix + "head"));
  }
  auto link = xml::make_element(
      prefix + "link", {{"rel", "stylesheet"}, {"type", "text/css"}, {"href", std::string(href)}}, true);
  // Placed before the whitespace that closes the head so "</head>" keeps its
  // line; no text is added, leaving the document's text content unchanged.
  const std::size_t n = head->child_count();
  if (n > 0 && head->child(n - 1).kind() == xml::NodeKind::Text &&
      head->child(n - 1).text().find_first_not_of(" \t\r\n") == std::string::npos) {
    head->insert_child(n - 1, std::move(link));
    return;
  }
  head->append_child(std::move(link));
}

}  // namespace narrate
