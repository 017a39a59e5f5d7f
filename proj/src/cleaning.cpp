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

#include "histocr/cleaning.hpp"

#include <unicode/utf8.h>

#include <cstdint>
#include <json.hpp>
#include <unordered_set>

#include "histocr/unicode.hpp"

namespace histocr {

namespace {

std::string_view trim(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  int32_t i = 0;
  std::size_t first = std::string_view::npos;
  std::size_t last_end = 0;
  while (i < n) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0 || !unicode::is_whitespace(static_cast<char32_t>(c))) {
      if (first == std::string_view::npos) first = static_cast<std::size_t>(at);
      last_end = static_cast<std::size_t>(i);
    }
  }
  if (first == std::string_view::npos) return {};
  return text.substr(first, last_end - first);
}

}  // namespace

FilterResult filter_duplicates_and_empty(std::span<const CorpusRecord> records) {
  FilterResult out;
  std::unordered_set<std::string_view> seen;
  for (const auto& r : records) {
    const std::string_view key = trim(r.text);
    if (key.empty() || !seen.insert(key).second) {
      out.removed.push_back(r);
    } else {
      out.kept.push_back(r);
    }
  }
  return out;
}

double non_alphabetic_fraction(std::string_view text) {
  std::size_t counted = 0;
  std::size_t non_alpha = 0;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_whitespace(cp)) continue;
    ++counted;
    if (!unicode::is_letter(cp)) ++non_alpha;
  }
  return counted == 0 ? 0.0 : static_cast<double>(non_alpha) / static_cast<double>(counted);
}

FilterResult filter_non_alphabetic(std::span<const CorpusRecord> records, double max_fraction) {
  FilterResult out;
  for (const auto& r : records) {
    (non_alphabetic_fraction(r.text) > max_fraction ? out.removed : out.kept).push_back(r);
  }
  return out;
}

FilterResult filter_short(std::span<const CorpusRecord> records, const Tokenizer& tokenizer,
                          std::size_t min_tokens) {
  FilterResult out;
  for (const auto& r : records) {
    (tokenizer.count(r.text) <= min_tokens ? out.removed : out.kept).push_back(r);
  }
  return out;
}

CleaningOutcome clean_corpus(std::span<const CorpusRecord> records, const Tokenizer& tokenizer,
                             const CleaningOptions& options) {
  CleaningOutcome outcome;
  CleaningReport& rep = outcome.report;
  rep.total_rows = records.size();

  std::vector<std::string_view> removed_by(records.size());
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string_view key = trim(records[i].text);
    if (key.empty() || !seen.insert(key).second) {
      removed_by[i] = cleaning_filter::duplicate_or_empty;
      ++rep.removed_duplicate_or_empty;
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!removed_by[i].empty()) continue;
    if (non_alphabetic_fraction(records[i].text) > options.max_non_alpha) {
      removed_by[i] = cleaning_filter::non_alphabetic;
      ++rep.removed_non_alpha;
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!removed_by[i].empty()) continue;
    if (tokenizer.count(records[i].text) <= options.min_tokens) {
      removed_by[i] = cleaning_filter::short_text;
      ++rep.removed_short;
    }
  }
  rep.surviving = rep.total_rows - rep.removed_duplicate_or_empty - rep.removed_non_alpha -
                  rep.removed_short;

  outcome.records.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ProcessedRecord p;
    p.source = records[i];
    if (!removed_by[i].empty()) {
      p.status = RecordStatus::cleaned_out;
      p.cleaning_filter = std::string(removed_by[i]);
    }
    outcome.records.push_back(std::move(p));
  }
  return outcome;
}

std::string cleaning_report_json(const CleaningReport& r) {
  nlohmann::ordered_json j;
  j["total_rows"] = r.total_rows;
  j["removed_duplicate_or_empty"] = {{"count", r.removed_duplicate_or_empty},
                                     {"percentage", r.pct_duplicate_or_empty()}};
  j["removed_non_alpha"] = {{"count", r.removed_non_alpha}, {"percentage", r.pct_non_alpha()}};
  j["removed_short"] = {{"count", r.removed_short}, {"percentage", r.pct_short()}};
  j["surviving"] = r.surviving;
  return j.dump(2) + "\n";
}

}  // namespace histocr
