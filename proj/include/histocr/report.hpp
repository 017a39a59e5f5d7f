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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "histocr/cleaning.hpp"
#include "histocr/corpus.hpp"
#include "histocr/tokenizer.hpp"

namespace histocr {

inline constexpr std::string_view kUnknownBucket = "unknown";

/// Corpus and run statistics. Row-level figures cover records that survived
/// cleaning; correction percentages are over all classified corrections.
struct RunReport {
  std::size_t input_rows = 0;
  std::size_t rows = 0;
  std::size_t words = 0;
  std::size_t tokens = 0;
  std::string tokenizer;
  std::size_t newspapers = 0;
  std::optional<std::pair<int, int>> year_range;
  std::size_t corrected_rows = 0;
  std::size_t content_policy_excluded = 0;
  std::size_t llm_failure_excluded = 0;
  std::size_t total_corrections = 0;
  std::size_t ocr_error_corrections = 0;
  std::size_t hallucination_corrections = 0;
  std::size_t surface_form_corrections = 0;
  std::size_t surface_forms = 0;
  std::size_t non_accent_surface_forms = 0;
  double pct_ocr_error = 0;
  double pct_hallucination = 0;
  double pct_surface_form = 0;
  double pct_content_policy_excluded = 0;
  std::map<std::string, double> country_distribution;
  std::map<int, std::size_t> decade_distribution;
  std::size_t undated_rows = 0;
  CleaningReport cleaning;

  bool operator==(const RunReport&) const = default;
};

/// Cleaning counts recovered from cleaned_out statuses and filter names.
CleaningReport cleaning_report_from(std::span<const ProcessedRecord> records);

RunReport build_report(std::span<const ProcessedRecord> records, const Tokenizer& tokenizer);

std::string report_json(const RunReport& report);
std::string report_text(const RunReport& report);

}  // namespace histocr
