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

#include "histocr/classifier.hpp"

#include <algorithm>

#include "histocr/unicode.hpp"

namespace histocr {

namespace {

bool is_vowel(char32_t cp) {
  switch (cp) {
    case U'a': case U'e': case U'i': case U'o': case U'u':
    case U'A': case U'E': case U'I': case U'O': case U'U':
      return true;
    default:
      return false;
  }
}

std::string word_chars_only(std::string_view raw) {
  std::string out;
  for (char32_t cp : unicode::decode(raw)) {
    if (unicode::is_word_char(cp)) unicode::append(out, cp);
  }
  return out;
}

std::size_t word_count(std::string_view normalized) {
  if (normalized.empty()) return 0;
  return static_cast<std::size_t>(std::count(normalized.begin(), normalized.end(), ' ')) + 1;
}

ClassifiedCorrection verdict(ClassifiedCorrection c, Label label, std::string_view rule) {
  c.label = label;
  c.rule = std::string(rule);
  return c;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += '+';
    out += id;
  }
  return out;
}

// Original "stemPRONOUN" rewritten as "PRONOUN stem", compared accent-folded.
const EncliticRule* match_enclitic(std::u32string_view original, std::u32string_view corrected,
                                   std::span<const EncliticRule> rules) {
  if (original.find(U' ') != std::u32string_view::npos) return nullptr;
  for (const auto& rule : rules) {
    const auto& p = rule.pronoun;
    if (original.size() <= p.size() || !original.ends_with(p)) continue;
    const auto stem = original.substr(0, original.size() - p.size());
    if (corrected.size() != p.size() + 1 + stem.size()) continue;
    if (corrected.starts_with(p) && corrected[p.size()] == U' ' &&
        corrected.substr(p.size() + 1) == stem) {
      return &rule;
    }
  }
  return nullptr;
}

}  // namespace

std::string normalize_segment(std::string_view segment) {
  std::string out;
  for (const Word& w : tokenize_words(segment)) {
    const std::u32string cps = unicode::decode(w.text);
    std::size_t b = 0;
    std::size_t e = cps.size();
    while (b < e && !unicode::is_word_char(cps[b])) ++b;
    while (e > b && !unicode::is_word_char(cps[e - 1])) --e;
    if (b == e) continue;
    if (!out.empty()) out += ' ';
    for (std::size_t i = b; i < e; ++i) unicode::append(out, unicode::to_lower(cps[i]));
  }
  return out;
}

std::pair<std::string, std::string> normalize_pair(const ChangeHunk& hunk) {
  return {normalize_segment(hunk.original_segment), normalize_segment(hunk.corrected_segment)};
}

std::string strip_accents(std::string_view text) {
  std::u32string out;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_accent_mark(cp) && !out.empty() && is_vowel(out.back())) continue;
    out.push_back(unicode::fold_accent(cp));
  }
  return unicode::encode(out);
}

ClassifiedCorrection classify_pair(std::string_view original_segment,
                                   std::string_view corrected_segment, const RuleTable& rules,
                                   const Thresholds& thresholds) {
  ClassifiedCorrection c;
  c.original = normalize_segment(original_segment);
  c.corrected = normalize_segment(corrected_segment);

  const bool raw_empty_o = tokenize_words(original_segment).empty();
  const bool raw_empty_c = tokenize_words(corrected_segment).empty();
  if (raw_empty_o || raw_empty_c || c.original.empty() != c.corrected.empty()) {
    return verdict(std::move(c), Label::hallucination, rule_id::insert_delete);
  }

  if (c.original == c.corrected) {
    if (word_chars_only(original_segment) == word_chars_only(corrected_segment)) {
      return verdict(std::move(c), Label::ocr_error, rule_id::punctuation_spacing);
    }
    return verdict(std::move(c), Label::hallucination, rule_id::case_only);
  }

  const std::string folded_o = strip_accents(c.original);
  const std::string folded_c = strip_accents(c.corrected);
  const std::u32string fo = unicode::decode(folded_o);
  const std::u32string fc = unicode::decode(folded_c);
  c.ratio = similarity_ratio(fo, fc);

  if (fo == fc) {
    c.accent_only = true;
    return verdict(std::move(c), Label::surface_form, rule_id::accent_only);
  }

  if (const auto* rule = match_enclitic(fo, fc, rules.enclitic_rules())) {
    return verdict(std::move(c), Label::surface_form, rule->id);
  }

  if (auto ids = match_substitutions(fo, fc, rules.surface_rules())) {
    return verdict(std::move(c), Label::surface_form, join_ids(*ids));
  }

  if (auto ids = match_substitutions(fo, fc, rules.ocr_rules())) {
    return verdict(std::move(c), Label::ocr_error, join_ids(*ids));
  }

  if (word_count(c.original) == 1 && word_count(c.corrected) == 1 &&
      unicode::length(c.original) == unicode::length(c.corrected)) {
    return verdict(std::move(c), Label::ocr_error, rule_id::equal_length);
  }

  const bool close = *c.ratio >= thresholds.ratio_threshold &&
                     word_count(c.corrected) <= thresholds.max_corrected_words;
  return verdict(std::move(c), close ? Label::ocr_error : Label::hallucination,
                 rule_id::ratio_threshold);
}

ClassifiedCorrection classify_hunk(const ChangeHunk& hunk, const RuleTable& rules,
                                   const Thresholds& thresholds) {
  const auto o = hunk.kind == HunkKind::insert ? std::string_view{} : hunk.original_segment;
  const auto c = hunk.kind == HunkKind::remove ? std::string_view{} : hunk.corrected_segment;
  ClassifiedCorrection out = classify_pair(o, c, rules, thresholds);
  out.original_span = hunk.original;
  out.corrected_span = hunk.corrected;
  return out;
}

std::vector<ClassifiedCorrection> classify_hunk_units(const ChangeHunk& hunk,
                                                      std::span<const Word> original,
                                                      std::span<const Word> corrected,
                                                      const RuleTable& rules,
                                                      const Thresholds& thresholds) {
  ClassifiedCorrection whole = classify_hunk(hunk, rules, thresholds);
  if (hunk.kind != HunkKind::replace || whole.rule == rule_id::punctuation_spacing ||
      whole.rule == rule_id::case_only) {
    return {std::move(whole)};
  }

  const auto ow = original.subspan(hunk.original.begin, hunk.original.size());
  const auto cw = corrected.subspan(hunk.corrected.begin, hunk.corrected.size());
  std::vector<std::string> ko;
  std::vector<std::string> kc;
  for (const auto& w : ow) ko.push_back(strip_accents(normalize_segment(w.text)));
  for (const auto& w : cw) kc.push_back(strip_accents(normalize_segment(w.text)));

  // LCS over folded keys; punctuation-only words never anchor.
  const std::size_t n = ko.size();
  const std::size_t m = kc.size();
  std::vector<std::size_t> lcs((n + 1) * (m + 1), 0);
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return lcs[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = (!ko[i].empty() && ko[i] == kc[j]) ? at(i + 1, j + 1) + 1
                                                    : std::max(at(i + 1, j), at(i, j + 1));
    }
  }
  std::vector<ClassifiedCorrection> units;
  const auto emit = [&](Span o, Span c) {
    const std::string os = join_words(original, o);
    const std::string cs = join_words(corrected, c);
    if (os == cs) return;
    ClassifiedCorrection u = classify_pair(os, cs, rules, thresholds);
    u.original_span = o;
    u.corrected_span = c;
    units.push_back(std::move(u));
  };

  // A gap with unequal word counts is cut into 1:1, 1:2 and 2:1 pieces when
  // every two-word piece is a plain space split/merge or an enclitic
  // reordering; otherwise it stays one unit.
  const std::size_t base_o = hunk.original.begin;
  const std::size_t base_c = hunk.corrected.begin;
  const auto split_ok = [&](std::size_t i, std::size_t j) {  // ko[i] -> kc[j] kc[j+1]
    if (!ko[i].empty() && ko[i] == kc[j] + kc[j + 1]) return true;
    const auto u = classify_pair(ow[i].text, cw[j].text + " " + cw[j + 1].text, rules, thresholds);
    return u.rule.starts_with("enclitic_");
  };
  const auto merge_ok = [&](std::size_t i, std::size_t j) {  // ko[i] ko[i+1] -> kc[j]
    return !kc[j].empty() && ko[i] + ko[i + 1] == kc[j];
  };
  const auto segment = [&](Span o, Span c) -> bool {
    const std::size_t no = o.size();
    const std::size_t nc = c.size();
    // reach[a][b]: the rest of the gap from (a, b) can be segmented.
    std::vector<char> reach((no + 1) * (nc + 1), 0);
    const auto r = [&](std::size_t a, std::size_t b) -> char& { return reach[a * (nc + 1) + b]; };
    const std::size_t oi = o.begin - base_o;
    const std::size_t cj = c.begin - base_c;
    r(no, nc) = 1;
    for (std::size_t a = no + 1; a-- > 0;) {
      for (std::size_t b = nc + 1; b-- > 0;) {
        if (a == no && b == nc) continue;
        r(a, b) = (a < no && b < nc && r(a + 1, b + 1)) ||
                  (a < no && b + 1 < nc && r(a + 1, b + 2) && split_ok(oi + a, cj + b)) ||
                  (a + 1 < no && b < nc && r(a + 2, b + 1) && merge_ok(oi + a, cj + b));
      }
    }
    if (!r(0, 0)) return false;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < no || b < nc) {
      if (a < no && b < nc && r(a + 1, b + 1)) {
        emit({o.begin + a, o.begin + a + 1}, {c.begin + b, c.begin + b + 1});
        ++a, ++b;
      } else if (a < no && b + 1 < nc && r(a + 1, b + 2) && split_ok(oi + a, cj + b)) {
        emit({o.begin + a, o.begin + a + 1}, {c.begin + b, c.begin + b + 2});
        ++a, b += 2;
      } else {
        emit({o.begin + a, o.begin + a + 2}, {c.begin + b, c.begin + b + 1});
        a += 2, ++b;
      }
    }
    return true;
  };
  const auto emit_gap = [&](Span o, Span c) {
    if (o.empty() && c.empty()) return;
    if (o.size() == c.size()) {
      for (std::size_t k = 0; k < o.size(); ++k) {
        emit({o.begin + k, o.begin + k + 1}, {c.begin + k, c.begin + k + 1});
      }
    } else if (o.empty() || c.empty() || !segment(o, c)) {
      emit(o, c);
    }
  };

  if (at(0, 0) == 0 && n != m) {
    if (segment(hunk.original, hunk.corrected)) return units;
    return {std::move(whole)};
  }

  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t gap_i = 0;
  std::size_t gap_j = 0;
  while (i < n && j < m) {
    if (!ko[i].empty() && ko[i] == kc[j]) {
      emit_gap({base_o + gap_i, base_o + i}, {base_c + gap_j, base_c + j});
      emit({base_o + i, base_o + i + 1}, {base_c + j, base_c + j + 1});
      ++i;
      ++j;
      gap_i = i;
      gap_j = j;
    } else if (at(i, j + 1) >= at(i + 1, j)) {
      ++j;
    } else {
      ++i;
    }
  }
  emit_gap({base_o + gap_i, base_o + n}, {base_c + gap_j, base_c + m});
  return units;
}

std::vector<ClassifiedCorrection> classify_text(std::string_view original,
                                                std::string_view corrected,
                                                const RuleTable& rules,
                                                const Thresholds& thresholds,
                                                const DiffOptions& diff_options) {
  const auto ow = tokenize_words(original);
  const auto cw = tokenize_words(corrected);
  std::vector<ClassifiedCorrection> out;
  for (const auto& hunk : diff_words(ow, cw, diff_options)) {
    auto units = classify_hunk_units(hunk, ow, cw, rules, thresholds);
    std::move(units.begin(), units.end(), std::back_inserter(out));
  }
  return out;
}

void FrequencyTable::add(const ClassifiedCorrection& c, std::size_t n) {
  counts_[{c.original, c.corrected}] += n;
}

void FrequencyTable::merge(const FrequencyTable& other) {
  for (const auto& [key, n] : other.counts_) counts_[key] += n;
}

std::size_t FrequencyTable::count(std::string_view original, std::string_view corrected) const {
  const auto it = counts_.find(std::pair<std::string, std::string>(original, corrected));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<FrequencyTable::Row> FrequencyTable::ranked() const {
  std::vector<Row> rows;
  rows.reserve(counts_.size());
  for (const auto& [key, n] : counts_) rows.push_back({key.first, key.second, n});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    if (a.original != b.original) return a.original < b.original;
    return a.corrected < b.corrected;
  });
  return rows;
}

FrequencyTable aggregate_frequencies(std::span<const ClassifiedCorrection> corrections) {
  FrequencyTable table;
  for (const auto& c : corrections) table.add(c);
  return table;
}

void backfill_frequencies(std::span<ClassifiedCorrection> corrections,
                          const FrequencyTable& table) {
  for (auto& c : corrections) c.frequency = std::max<std::size_t>(1, table.count(c.original, c.corrected));
}

void apply_frequency_promotion(std::span<ClassifiedCorrection> corrections,
                               const Thresholds& thresholds) {
  if (thresholds.promotion_min_frequency == 0) return;
  const double low = thresholds.ratio_threshold - thresholds.promotion_band;
  for (auto& c : corrections) {
    if (c.label != Label::hallucination || c.rule != rule_id::ratio_threshold || !c.ratio) continue;
    if (c.frequency < thresholds.promotion_min_frequency) continue;
    if (*c.ratio < low || *c.ratio >= thresholds.ratio_threshold) continue;
    if (word_count(c.corrected) > thresholds.max_corrected_words) continue;
    c.label = Label::ocr_error;
    c.rule = std::string(rule_id::frequency_promotion);
  }
}

std::vector<std::string_view> rule_ids(std::string_view rule) {
  std::vector<std::string_view> ids;
  std::size_t pos = 0;
  while (true) {
    const std::size_t plus = rule.find('+', pos);
    ids.push_back(rule.substr(pos, plus == std::string_view::npos ? plus : plus - pos));
    if (plus == std::string_view::npos) break;
    pos = plus + 1;
  }
  return ids;
}

std::vector<SelfTestFailure> self_test(const RuleTable& rules, const Thresholds& thresholds) {
  std::vector<SelfTestFailure> failures;
  for (const auto& row : rules.rows()) {
    auto got = classify_pair(row.example_original, row.example_corrected, rules, thresholds);
    const auto ids = rule_ids(got.rule);
    const bool id_ok = std::find(ids.begin(), ids.end(), row.id) != ids.end();
    if (got.label != row.label || !id_ok) failures.push_back({row, std::move(got)});
  }
  return failures;
}

}  // namespace histocr
