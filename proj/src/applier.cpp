// Copyright 2026 The histocr Authors
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

#include "histocr/applier.hpp"

#include <algorithm>
#include <map>

#include "histocr/classifier.hpp"

namespace histocr {

namespace {

std::string_view corrected_bytes(std::string_view corrected, std::span<const Word> words, Span s) {
  const std::size_t b = words[s.begin].begin;
  const std::size_t e = words[s.end - 1].end;
  return corrected.substr(b, e - b);
}

}  // namespace

std::string apply_edits(std::string_view original, std::span<const Word> ow,
                        std::string_view corrected, std::span<const Word> cw,
                        std::vector<Edit> edits) {
  for (const auto& e : edits) {
    if (e.original.end < e.original.begin || e.original.end > ow.size() ||
        e.corrected.end < e.corrected.begin || e.corrected.end > cw.size()) {
      throw IntegrityError("edit span out of range");
    }
  }
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    if (a.original.begin != b.original.begin) return a.original.begin > b.original.begin;
    return a.original.end > b.original.end;
  });
  for (std::size_t k = 1; k < edits.size(); ++k) {
    // edits[k] lies to the left of edits[k-1].
    if (edits[k].original.end > edits[k - 1].original.begin) {
      throw IntegrityError("overlapping edits");
    }
  }

  std::string out(original);
  const std::size_t n = ow.size();
  for (const auto& e : edits) {
    const Span o = e.original;
    const Span c = e.corrected;
    if (o.empty() && c.empty()) continue;
    if (o.empty()) {
      const std::string_view text = corrected_bytes(corrected, cw, c);
      if (n == 0) {
        out.insert(out.size(), text);
      } else if (o.begin < n) {
        out.insert(ow[o.begin].begin, std::string(text) + " ");
      } else {
        out.insert(ow[n - 1].end, " " + std::string(text));
      }
    } else if (c.empty()) {
      if (o.end < n) {
        out.erase(ow[o.begin].begin, ow[o.end].begin - ow[o.begin].begin);
      } else if (o.begin > 0) {
        out.erase(ow[o.begin - 1].end, ow[o.end - 1].end - ow[o.begin - 1].end);
      } else {
        out.erase(ow[o.begin].begin, ow[o.end - 1].end - ow[o.begin].begin);
      }
    } else {
      const std::size_t b = ow[o.begin].begin;
      const std::size_t len = ow[o.end - 1].end - b;
      out.replace(b, len, corrected_bytes(corrected, cw, c));
    }
  }
  return out;
}

std::string apply_corrections(std::string_view original, std::string_view corrected,
                              std::span<const ClassifiedCorrection> corrections,
                              const ApplyOptions& options) {
  const auto ow = tokenize_words(original);
  const auto cw = tokenize_words(corrected);
  std::vector<Edit> edits;
  for (const auto& c : corrections) {
    const bool wanted = c.label == Label::ocr_error ||
                        (options.modernize && c.label == Label::surface_form);
    if (!wanted) continue;
    if (c.original_span.end > ow.size() || c.corrected_span.end > cw.size() ||
        c.original_span.end < c.original_span.begin ||
        c.corrected_span.end < c.corrected_span.begin) {
      throw IntegrityError("correction '" + c.original + "' -> '" + c.corrected +
                           "' spans fall outside the text");
    }
    if (normalize_segment(join_words(ow, c.original_span)) != c.original ||
        normalize_segment(join_words(cw, c.corrected_span)) != c.corrected) {
      throw IntegrityError("correction '" + c.original + "' -> '" + c.corrected +
                           "' does not match the text at its spans");
    }
    edits.push_back({c.original_span, c.corrected_span});
  }
  return apply_edits(original, ow, corrected, cw, std::move(edits));
}

Lexicon emit_lexicon(std::span<const ClassifiedCorrection> corrections) {
  std::map<std::pair<std::string, std::string>, SurfaceFormEntry> by_pair;
  for (const auto& c : corrections) {
    if (c.label != Label::surface_form || c.original == c.corrected) continue;
    auto [it, fresh] = by_pair.try_emplace({c.original, c.corrected});
    SurfaceFormEntry& e = it->second;
    if (fresh) {
      e.original = c.original;
      e.modern = c.corrected;
      e.rule = c.rule;
      e.accent_only = c.accent_only;
    }
    ++e.frequency;
  }
  Lexicon lex;
  for (auto& [key, entry] : by_pair) lex.full.push_back(std::move(entry));
  std::stable_sort(lex.full.begin(), lex.full.end(),
                   [](const SurfaceFormEntry& a, const SurfaceFormEntry& b) {
                     if (a.frequency != b.frequency) return a.frequency > b.frequency;
                     if (a.original != b.original) return a.original < b.original;
                     return a.modern < b.modern;
                   });
  for (const auto& e : lex.full) {
    if (!e.accent_only) lex.non_accent.push_back(e);
  }
  return lex;
}

std::string lexicon_tsv(std::span<const SurfaceFormEntry> entries) {
  std::string out = "original\tmodern\trule\tfrequency\taccent_only\n";
  for (const auto& e : entries) {
    out += e.original;
    out += '\t';
    out += e.modern;
    out += '\t';
    out += e.rule;
    out += '\t';
    out += std::to_string(e.frequency);
    out += '\t';
    out += e.accent_only ? "true" : "false";
    out += '\n';
  }
  return out;
}

}  // namespace histocr
