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

#include "histocr/rules.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "histocr/corpus.hpp"
#include "histocr/unicode.hpp"
#include "default_rules.inc"

namespace histocr {

namespace {

std::u32string fold(std::string_view s) {
  std::u32string out;
  for (char32_t cp : unicode::decode(s)) {
    if (unicode::is_accent_mark(cp)) continue;
    out.push_back(unicode::fold_accent(unicode::to_lower(cp)));
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

bool single_code_point(std::string_view s) { return unicode::length(s) == 1; }

}  // namespace

std::string_view RuleTable::default_text() { return kDefaultRulesText; }

const RuleTable& RuleTable::defaults() {
  static const RuleTable table = parse(kDefaultRulesText, "<default rules>");
  return table;
}

RuleTable RuleTable::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const CorpusError& e) {
    throw RuleError(e.what());
  }
  return parse(text, path.string());
}

std::size_t RuleTable::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [&](const RuleRow& r) { return r.label == label; }));
}

RuleTable RuleTable::parse(std::string_view text, std::string_view source) {
  RuleTable table;
  const auto fail = [&](std::size_t line, const std::string& msg) {
    throw RuleError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!saw_header) {
      const std::string expected = "#! histocr-rules " + std::to_string(kFormatVersion);
      if (line != expected) fail(line_no, "expected header '" + expected + "'");
      saw_header = true;
      continue;
    }
    if (line.empty() || line.front() == '#') continue;

    const auto cols = split_tabs(line);
    if (cols.size() != 4) fail(line_no, "expected 4 tab-separated columns");
    RuleRow row;

    const std::string_view pattern = cols[0];
    const std::size_t bar = pattern.find('|');
    if (bar == std::string_view::npos || bar == 0 || bar + 1 == pattern.size()) {
      fail(line_no, "pattern must be from|to");
    }
    row.from = std::string(pattern.substr(0, bar));
    row.to = std::string(pattern.substr(bar + 1));

    if (cols[1] == "<->") {
      row.two_way = true;
    } else if (cols[1] != "->") {
      fail(line_no, "direction must be <-> or ->");
    }

    const std::size_t gt = cols[2].find('>');
    if (gt == std::string_view::npos || gt == 0 || gt + 1 == cols[2].size()) {
      fail(line_no, "example must be original>corrected");
    }
    row.example_original = std::string(cols[2].substr(0, gt));
    row.example_corrected = std::string(cols[2].substr(gt + 1));

    try {
      row.label = parse_label(cols[3]);
    } catch (const std::invalid_argument& e) {
      fail(line_no, e.what());
    }
    if (row.label == Label::hallucination) fail(line_no, "rules cannot label hallucinations");

    const bool enclitic = row.from.starts_with("...") && row.to.ends_with(" ...");
    if (enclitic) {
      row.kind = RuleKind::enclitic;
      const std::string pronoun = row.from.substr(3);
      if (pronoun.empty() || row.to != pronoun + " ...") {
        fail(line_no, "enclitic pattern must be ...X|X ...");
      }
      row.id = "enclitic_" + pronoun;
      table.enclitic_.push_back({row.id, fold(pronoun)});
    } else if (single_code_point(row.from) && single_code_point(row.to) &&
               fold(row.from) == fold(row.to)) {
      row.kind = RuleKind::accent;
      row.id = std::string(rule_id::accent_only);
    } else {
      row.kind = RuleKind::substitution;
      const std::string prefix = row.label == Label::surface_form ? "table_" : "ocr_";
      row.id = prefix + row.from + "_" + row.to;
      SubstitutionRule rule{row.id, fold(row.from), fold(row.to), row.two_way};
      if (rule.from == rule.to) fail(line_no, "pattern sides are identical after folding");
      (row.label == Label::surface_form ? table.surface_ : table.ocr_).push_back(std::move(rule));
    }
    table.rows_.push_back(std::move(row));
  }
  if (!saw_header) fail(1, "empty rules file");
  return table;
}

std::optional<std::vector<std::string>> match_substitutions(
    std::u32string_view a, std::u32string_view b, std::span<const SubstitutionRule> rules) {
  if (a == b) return std::nullopt;
  constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max();
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t width = m + 1;

  // choice: 0 = copy, 2k+1 = rule k forward, 2k+2 = rule k reversed.
  std::vector<uint32_t> cost((n + 1) * width, kInf);
  std::vector<uint32_t> choice((n + 1) * width, 0);
  cost[n * width + m] = 0;
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) continue;
      uint32_t best = kInf;
      uint32_t pick = 0;
      if (i < n && j < m && a[i] == b[j]) {
        best = cost[(i + 1) * width + j + 1];
      }
      for (std::size_t k = 0; k < rules.size(); ++k) {
        const auto try_step = [&](std::u32string_view lhs, std::u32string_view rhs, uint32_t tag) {
          if (a.substr(i).starts_with(lhs) && b.substr(j).starts_with(rhs)) {
            const uint32_t next = cost[(i + lhs.size()) * width + j + rhs.size()];
            if (next != kInf && next + 1 < best) {
              best = next + 1;
              pick = tag;
            }
          }
        };
        try_step(rules[k].from, rules[k].to, static_cast<uint32_t>(2 * k + 1));
        if (rules[k].two_way) try_step(rules[k].to, rules[k].from, static_cast<uint32_t>(2 * k + 2));
      }
      cost[i * width + j] = best;
      choice[i * width + j] = pick;
    }
  }
  if (cost[0] == kInf || cost[0] == 0) return std::nullopt;

  std::vector<std::string> used;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    const uint32_t pick = choice[i * width + j];
    if (pick == 0) {
      ++i;
      ++j;
      continue;
    }
    const auto& rule = rules[(pick - 1) / 2];
    const bool forward = (pick % 2) == 1;
    i += forward ? rule.from.size() : rule.to.size();
    j += forward ? rule.to.size() : rule.from.size();
    if (std::find(used.begin(), used.end(), rule.id) == used.end()) used.push_back(rule.id);
  }
  return used;
}

}  // namespace histocr
