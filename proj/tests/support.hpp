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

#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>
#include <unistd.h>

#include "histocr/applier.hpp"
#include "histocr/classifier.hpp"
#include "histocr/diff.hpp"

namespace histocr::testing {

inline std::filesystem::path fixture(std::string_view name) {
  return std::filesystem::path(HISTOCR_FIXTURES) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("histocr-test-" + std::to_string(::getpid()) + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Brute-force matching blocks. Deliberately naive: every (i, j) start is
// tried and the longest block wins, earliest in a then in b.
inline std::size_t oracle_matches(std::u32string_view a, std::u32string_view b) {
  if (a.empty() || b.empty()) return 0;
  std::size_t best = 0;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = 0;
      while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
      if (k > best) {
        best = k;
        bi = i;
        bj = j;
      }
    }
  }
  if (best == 0) return 0;
  return best + oracle_matches(a.substr(0, bi), b.substr(0, bj)) +
         oracle_matches(a.substr(bi + best), b.substr(bj + best));
}

inline double oracle_ratio(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  return 2.0 * static_cast<double>(oracle_matches(a, b)) / static_cast<double>(a.size() + b.size());
}

// Random historical-looking text and an LLM-style rewrite of it: accent and
// letter changes, digit confusions, split and merged words, insertions,
// deletions and punctuation moves.
struct MutatedPair {
  std::string original;
  std::string corrected;
};

inline MutatedPair random_pair(std::mt19937_64& rng, bool irregular_spacing) {
  static const std::vector<std::string> vocab = {
      "la", "el", "de", "que", "se", "mana", "sesion", "á", "à", "mas", "ménos", "dió",
      "publicacion", "harà", "gravados", "urjía", "decia", "mui", "i", "jeneral", "cuarto",
      ";", ",", "Num.", "8.", "POLITICA", "Señores", "d1a", "5eñor", "loexija", "noche"};
  static const std::vector<std::string> extra = {"además", "semana", "lo", "exija", "fin",
                                                 "y", "muy", "general", "día", "señor"};
  const auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  const auto sep = [&]() -> std::string {
    if (!irregular_spacing) return " ";
    switch (rng() % 6) {
      case 0: return "  ";
      case 1: return "\n";
      case 2: return " \t";
      default: return " ";
    }
  };
  std::vector<std::string> a;
  const int n = static_cast<int>(rng() % 25);
  for (int i = 0; i < n; ++i) a.push_back(pick(vocab));

  std::vector<std::string> b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string& w = a[i];
    switch (rng() % 12) {
      case 0: break;                                         // delete
      case 1: b.push_back(w); b.push_back(pick(extra)); break;  // insert after
      case 2: b.push_back(pick(extra)); break;               // replace
      case 3:                                                // merge with next
        if (i + 1 < a.size()) {
          b.push_back(w + a[i + 1]);
          ++i;
        } else {
          b.push_back(w);
        }
        break;
      case 4:                                                // split
        if (w.size() > 2) {
          b.push_back(w.substr(0, 1));
          b.push_back(w.substr(1));
        } else {
          b.push_back(w);
        }
        break;
      case 5: b.push_back(w + ","); break;                   // punctuation
      default: b.push_back(w);
    }
  }
  if (rng() % 8 == 0) b.insert(b.begin(), pick(extra));

  MutatedPair p;
  const auto join = [&](const std::vector<std::string>& words, std::string& out) {
    if (irregular_spacing && rng() % 3 == 0) out += sep();
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out += sep();
      out += words[i];
    }
    if (irregular_spacing && rng() % 3 == 0) out += sep();
  };
  join(a, p.original);
  join(b, p.corrected);
  return p;
}

// Empty string when both reconstruction properties hold, else a message.
// (1) Applying every diff hunk yields the corrected word sequence, and the
//     corrected text itself when spacing is regular.
// (2) Applying only the ocr_error units changes nothing but their spans:
//     the result equals the original with each unit's byte range swapped
//     for the corrected bytes, built left to right here.
inline std::string check_reconstruction(const MutatedPair& p, bool regular_spacing) {
  const auto ow = tokenize_words(p.original);
  const auto cw = tokenize_words(p.corrected);
  std::vector<Edit> edits;
  for (const auto& h : diff_words(ow, cw)) edits.push_back({h.original, h.corrected});
  const std::string all = apply_edits(p.original, ow, p.corrected, cw, edits);
  const auto rw = tokenize_words(all);
  if (rw.size() != cw.size()) return "word count differs after applying all hunks: " + all;
  for (std::size_t i = 0; i < rw.size(); ++i) {
    if (rw[i].text != cw[i].text) return "word " + std::to_string(i) + " differs: " + all;
  }
  if (regular_spacing && all != p.corrected) return "bytes differ after applying all hunks: " + all;

  const auto units = classify_text(p.original, p.corrected, RuleTable::defaults(), Thresholds{});
  std::vector<ClassifiedCorrection> ocr;
  for (const auto& u : units) {
    if (u.label == Label::ocr_error) ocr.push_back(u);
  }
  std::sort(ocr.begin(), ocr.end(), [](const auto& x, const auto& y) {
    return x.original_span.begin < y.original_span.begin;
  });
  std::string expected;
  std::size_t at = 0;
  for (const auto& u : ocr) {
    if (u.original_span.empty() || u.corrected_span.empty()) return "ocr_error unit with an empty side";
    const std::size_t b = ow[u.original_span.begin].begin;
    const std::size_t e = ow[u.original_span.end - 1].end;
    if (b < at) return "overlapping ocr_error units";
    const std::size_t cb = cw[u.corrected_span.begin].begin;
    const std::size_t ce = cw[u.corrected_span.end - 1].end;
    expected.append(p.original, at, b - at);
    expected.append(p.corrected, cb, ce - cb);
    at = e;
  }
  expected.append(p.original, at, std::string::npos);
  const std::string got = apply_corrections(p.original, p.corrected, units);
  if (got != expected) return "bytes outside ocr_error spans changed: '" + got + "' vs '" + expected + "'";
  return {};
}

}  // namespace histocr::testing
