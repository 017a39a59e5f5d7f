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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "histocr/correction.hpp"
#include "histocr/diff.hpp"
#include "histocr/rules.hpp"

namespace histocr {

struct Thresholds {
  // Minimum accent-folded similarity for a leftover change to count as an
  // OCR fix.
  double ratio_threshold = 0.5;
  // Leftover changes whose corrected side has more words are hallucinations.
  std::size_t max_corrected_words = 3;
  // Frequency promotion of near-threshold pairs; 0 disables it.
  std::size_t promotion_min_frequency = 0;
  double promotion_band = 0.1;
};

/// Lowercases, strips leading/trailing punctuation from every word, drops
/// words that were only punctuation, and joins the rest with single spaces.
std::string normalize_segment(std::string_view segment);

std::pair<std::string, std::string> normalize_pair(const ChangeHunk& hunk);

/// Removes acute and grave accents from vowels, precomposed or combining.
std::string strip_accents(std::string_view text);

/// The classification cascade on one original/corrected segment pair. An
/// empty side means an insertion or deletion. Spans are left empty.
ClassifiedCorrection classify_pair(std::string_view original_segment,
                                   std::string_view corrected_segment, const RuleTable& rules,
                                   const Thresholds& thresholds);

/// Classifies the hunk as a single unit.
ClassifiedCorrection classify_hunk(const ChangeHunk& hunk, const RuleTable& rules,
                                   const Thresholds& thresholds);

/// Splits a hunk into classification units and classifies each. Words whose
/// accent-folded normal forms agree are paired one-to-one; the gaps between
/// such pairs are paired word-by-word when both sides have the same number
/// of words and classified whole otherwise. Unchanged pairs produce no unit.
std::vector<ClassifiedCorrection> classify_hunk_units(const ChangeHunk& hunk,
                                                      std::span<const Word> original,
                                                      std::span<const Word> corrected,
                                                      const RuleTable& rules,
                                                      const Thresholds& thresholds);

/// Tokenize, diff and classify every unit of one record.
std::vector<ClassifiedCorrection> classify_text(std::string_view original,
                                                std::string_view corrected,
                                                const RuleTable& rules,
                                                const Thresholds& thresholds,
                                                const DiffOptions& diff_options = {});

/// Corpus-wide (original, corrected) pair counts. Merging is commutative and
/// associative, so shards can be counted independently.
class FrequencyTable {
 public:
  struct Row {
    std::string original;
    std::string corrected;
    std::size_t frequency = 0;
  };

  void add(const ClassifiedCorrection& c, std::size_t n = 1);
  void merge(const FrequencyTable& other);
  std::size_t count(std::string_view original, std::string_view corrected) const;
  std::size_t distinct() const { return counts_.size(); }
  /// Ordered by frequency descending, then original, then corrected.
  std::vector<Row> ranked() const;

  bool operator==(const FrequencyTable&) const = default;

 private:
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> counts_;
};

FrequencyTable aggregate_frequencies(std::span<const ClassifiedCorrection> corrections);

/// Writes the table's count into every correction's frequency field.
void backfill_frequencies(std::span<ClassifiedCorrection> corrections, const FrequencyTable& table);

/// Promotes frequent hallucinations that fell just below the ratio threshold.
/// No-op when promotion_min_frequency is 0. Call after backfilling.
void apply_frequency_promotion(std::span<ClassifiedCorrection> corrections,
                               const Thresholds& thresholds);

struct SelfTestFailure {
  RuleRow row;
  ClassifiedCorrection got;
};

/// Classifies every row's example pair and reports rows whose label differs
/// or whose id is not among the fired rules.
std::vector<SelfTestFailure> self_test(const RuleTable& rules, const Thresholds& thresholds);

/// Splits a '+'-joined rule field into ids.
std::vector<std::string_view> rule_ids(std::string_view rule);

}  // namespace histocr
