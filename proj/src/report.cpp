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

#include "histocr/report.hpp"

#include <fmt/format.h>

#include <json.hpp>
#include <set>

#include "histocr/applier.hpp"
#include "histocr/diff.hpp"

namespace histocr {

namespace {

double pct(std::size_t n, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(total);
}

}  // namespace

CleaningReport cleaning_report_from(std::span<const ProcessedRecord> records) {
  CleaningReport r;
  r.total_rows = records.size();
  for (const auto& p : records) {
    if (p.status != RecordStatus::cleaned_out) continue;
    const std::string_view f = p.cleaning_filter.value_or("");
    if (f == cleaning_filter::non_alphabetic) {
      ++r.removed_non_alpha;
    } else if (f == cleaning_filter::short_text) {
      ++r.removed_short;
    } else {
      ++r.removed_duplicate_or_empty;
    }
  }
  r.surviving = r.total_rows - r.removed_duplicate_or_empty - r.removed_non_alpha - r.removed_short;
  return r;
}

RunReport build_report(std::span<const ProcessedRecord> records, const Tokenizer& tokenizer) {
  RunReport rep;
  rep.input_rows = records.size();
  rep.tokenizer = std::string(tokenizer.id());
  rep.cleaning = cleaning_report_from(records);

  std::set<std::string> newspapers;
  std::map<std::string, std::size_t> countries;
  std::vector<ClassifiedCorrection> all;
  for (const auto& p : records) {
    if (p.status == RecordStatus::cleaned_out) continue;
    const CorpusRecord& r = p.source;
    ++rep.rows;
    rep.words += tokenize_words(r.text).size();
    rep.tokens += tokenizer.count(r.text);
    newspapers.insert(r.newspaper.empty() ? std::string(kUnknownBucket) : r.newspaper);
    ++countries[r.country.empty() ? std::string(kUnknownBucket) : r.country];
    if (r.year) {
      if (!rep.year_range) {
        rep.year_range = {{*r.year, *r.year}};
      } else {
        rep.year_range->first = std::min(rep.year_range->first, *r.year);
        rep.year_range->second = std::max(rep.year_range->second, *r.year);
      }
      ++rep.decade_distribution[*r.decade()];
    } else {
      ++rep.undated_rows;
    }
    switch (p.status) {
      case RecordStatus::corrected: ++rep.corrected_rows; break;
      case RecordStatus::excluded_content_policy: ++rep.content_policy_excluded; break;
      case RecordStatus::excluded_llm_failure: ++rep.llm_failure_excluded; break;
      default: break;
    }
    if (p.status == RecordStatus::corrected) {
      for (const auto& c : p.corrections) {
        all.push_back(c);
        switch (c.label) {
          case Label::ocr_error: ++rep.ocr_error_corrections; break;
          case Label::hallucination: ++rep.hallucination_corrections; break;
          case Label::surface_form: ++rep.surface_form_corrections; break;
        }
      }
    }
  }
  rep.newspapers = newspapers.size();
  rep.total_corrections = all.size();
  rep.pct_ocr_error = pct(rep.ocr_error_corrections, rep.total_corrections);
  rep.pct_hallucination = pct(rep.hallucination_corrections, rep.total_corrections);
  rep.pct_surface_form = pct(rep.surface_form_corrections, rep.total_corrections);
  rep.pct_content_policy_excluded = pct(rep.content_policy_excluded, rep.rows);
  for (const auto& [country, n] : countries) rep.country_distribution[country] = pct(n, rep.rows);

  const Lexicon lex = emit_lexicon(all);
  rep.surface_forms = lex.full.size();
  rep.non_accent_surface_forms = lex.non_accent.size();
  return rep;
}

std::string report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["input_rows"] = r.input_rows;
  j["rows"] = r.rows;
  j["words"] = r.words;
  j["tokens"] = r.tokens;
  j["tokenizer"] = r.tokenizer;
  j["newspapers"] = r.newspapers;
  j["year_range"] = r.year_range ? nlohmann::ordered_json::array({r.year_range->first, r.year_range->second})
                                 : nlohmann::ordered_json(nullptr);
  j["corrected_rows"] = r.corrected_rows;
  j["content_policy_excluded"] = r.content_policy_excluded;
  j["llm_failure_excluded"] = r.llm_failure_excluded;
  j["total_corrections"] = r.total_corrections;
  j["ocr_error_corrections"] = r.ocr_error_corrections;
  j["hallucination_corrections"] = r.hallucination_corrections;
  j["surface_form_corrections"] = r.surface_form_corrections;
  j["surface_forms"] = r.surface_forms;
  j["non_accent_surface_forms"] = r.non_accent_surface_forms;
  j["pct_ocr_error"] = r.pct_ocr_error;
  j["pct_hallucination"] = r.pct_hallucination;
  j["pct_surface_form"] = r.pct_surface_form;
  j["pct_content_policy_excluded"] = r.pct_content_policy_excluded;
  auto countries = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.country_distribution) countries[k] = v;
  j["country_distribution"] = std::move(countries);
  auto decades = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.decade_distribution) decades[std::to_string(k)] = v;
  j["decade_distribution"] = std::move(decades);
  j["undated_rows"] = r.undated_rows;
  j["cleaning"] = nlohmann::ordered_json::parse(cleaning_report_json(r.cleaning));
  return j.dump(2) + "\n";
}

std::string report_text(const RunReport& r) {
  std::string out;
  const auto line = [&](std::string_view key, const std::string& value) {
    out += fmt::format("{:<32}{}\n", key, value);
  };
  out += "Corpus\n";
  line("Input rows", std::to_string(r.input_rows));
  line("Rows", std::to_string(r.rows));
  line("Words", std::to_string(r.words));
  line("Tokens (" + r.tokenizer + ")", std::to_string(r.tokens));
  line("Newspapers", std::to_string(r.newspapers));
  line("Years range", r.year_range ? fmt::format("{} - {}", r.year_range->first, r.year_range->second)
                                   : std::string("n/a"));
  out += "\nCleaning\n";
  line("Duplicates or empty", fmt::format("{} ({:.2f}%)", r.cleaning.removed_duplicate_or_empty,
                                          r.cleaning.pct_duplicate_or_empty()));
  line("Over non-alphabetic limit",
       fmt::format("{} ({:.2f}%)", r.cleaning.removed_non_alpha, r.cleaning.pct_non_alpha()));
  line("Too few tokens", fmt::format("{} ({:.2f}%)", r.cleaning.removed_short, r.cleaning.pct_short()));
  out += "\nCorrections\n";
  line("Corrected rows", std::to_string(r.corrected_rows));
  line("Content-policy exclusions",
       fmt::format("{} ({:.2f}%)", r.content_policy_excluded, r.pct_content_policy_excluded));
  line("LLM failures", std::to_string(r.llm_failure_excluded));
  line("Total corrections", std::to_string(r.total_corrections));
  line("Surface forms", std::to_string(r.surface_forms));
  line("Non-accent surface forms", std::to_string(r.non_accent_surface_forms));
  line("% of OCR error corrections", fmt::format("{:.2f}%", r.pct_ocr_error));
  line("% of hallucinations detected", fmt::format("{:.2f}%", r.pct_hallucination));
  line("% of surface form corrections", fmt::format("{:.2f}%", r.pct_surface_form));
  out += "\nCountry presence\n";
  for (const auto& [country, share] : r.country_distribution) line(country, fmt::format("{:.2f}%", share));
  out += "\nDecades\n";
  for (const auto& [decade, n] : r.decade_distribution) line(std::to_string(decade) + "s", std::to_string(n));
  if (r.undated_rows > 0) line(std::string(kUnknownBucket), std::to_string(r.undated_rows));
  return out;
}

}  // namespace histocr
