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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/corpus.hpp"
#include "histocr/tokenizer.hpp"

namespace histocr {

namespace cleaning_filter {
inline constexpr std::string_view duplicate_or_empty = "duplicate_or_empty";
inline constexpr std::string_view non_alphabetic = "non_alphabetic";
inline constexpr std::string_view short_text = "short";
}  // namespace cleaning_filter

struct FilterResult {
  std::vector<CorpusRecord> kept;
  std::vector<CorpusRecord> removed;
};

struct CleaningOptions {
  std::size_t min_tokens = 4;  // rows with this many tokens or fewer go
  double max_non_alpha = 0.5;  // strictly above this fraction goes
};

struct CleaningReport {
  std::size_t total_rows = 0;
  std::size_t removed_duplicate_or_empty = 0;
  std::size_t removed_non_alpha = 0;
  std::size_t removed_short = 0;
  std::size_t surviving = 0;

  double pct_duplicate_or_empty() const { return pct(removed_duplicate_or_empty); }
  double pct_non_alpha() const { return pct(removed_non_alpha); }
  double pct_short() const { return pct(removed_short); }

  bool operator==(const CleaningReport&) const = default;

 private:
  double pct(std::size_t n) const {
    return total_rows == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(total_rows);
  }
};

/// Removes whitespace-only texts and texts equal (after trimming) to an
/// earlier one. First occurrence wins.
FilterResult filter_duplicates_and_empty(std::span<const CorpusRecord> records);

/// Fraction of non-whitespace code points that are not letters; 0 for a
/// text with no non-whitespace characters.
double non_alphabetic_fraction(std::string_view text);

FilterResult filter_non_alphabetic(std::span<const CorpusRecord> records, double max_fraction = 0.5);

FilterResult filter_short(std::span<const CorpusRecord> records, const Tokenizer& tokenizer,
                          std::size_t min_tokens = 4);

struct CleaningOutcome {
  std::vector<ProcessedRecord> records;  // input order; removed ones are cleaned_out
  CleaningReport report;
};

/// Duplicates/empty, then non-alphabetic, then short.
CleaningOutcome clean_corpus(std::span<const CorpusRecord> records, const Tokenizer& tokenizer,
                             const CleaningOptions& options = {});

std::string cleaning_report_json(const CleaningReport& report);

}  // namespace histocr
