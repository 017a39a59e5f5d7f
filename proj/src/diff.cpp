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

#include "histocr/diff.hpp"

#include <unicode/utf8.h>

#include <cstdint>
#include <tuple>

#include "histocr/unicode.hpp"

namespace histocr {

std::string_view to_string(HunkKind kind) {
  switch (kind) {
    case HunkKind::replace: return "replace";
    case HunkKind::insert: return "insert";
    case HunkKind::remove: return "delete";
  }
  return "replace";
}

std::vector<Word> tokenize_words(std::string_view text) {
  std::vector<Word> words;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  int32_t i = 0;
  int32_t word_begin = -1;
  while (i < n) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    const bool space = c >= 0 && unicode::is_whitespace(static_cast<char32_t>(c));
    if (space) {
      if (word_begin >= 0) {
        const auto b = static_cast<std::size_t>(word_begin);
        const auto e = static_cast<std::size_t>(at);
        words.push_back({std::string(text.substr(b, e - b)), b, e});
        word_begin = -1;
      }
    } else if (word_begin < 0) {
      word_begin = at;
    }
  }
  if (word_begin >= 0) {
    const auto b = static_cast<std::size_t>(word_begin);
    words.push_back({std::string(text.substr(b)), b, text.size()});
  }
  return words;
}

std::string join_words(std::span<const Word> words, Span span) {
  std::string out;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    if (i != span.begin) out += ' ';
    out += words[i].text;
  }
  return out;
}

namespace {

enum class Op : uint8_t { match, remove, insert };

// Edit script for the trimmed middle via a suffix LCS table. At a tie the
// corrected word is skipped first, so each original word is matched as
// early as possible.
std::vector<Op> align(std::span<const Word> a, std::span<const Word> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t width = m + 1;
  std::vector<uint32_t> lcs((n + 1) * width, 0);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      uint32_t& cell = lcs[i * width + j];
      if (a[i].text == b[j].text) {
        cell = lcs[(i + 1) * width + j + 1] + 1;
      } else {
        cell = std::max(lcs[(i + 1) * width + j], lcs[i * width + j + 1]);
      }
    }
  }
  std::vector<Op> ops;
  ops.reserve(n + m);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (a[i].text == b[j].text) {
      ops.push_back(Op::match);
      ++i;
      ++j;
    } else if (lcs[i * width + j + 1] >= lcs[(i + 1) * width + j]) {
      ops.push_back(Op::insert);
      ++j;
    } else {
      ops.push_back(Op::remove);
      ++i;
    }
  }
  for (; i < n; ++i) ops.push_back(Op::remove);
  for (; j < m; ++j) ops.push_back(Op::insert);
  return ops;
}

ChangeHunk make_hunk(std::span<const Word> original, std::span<const Word> corrected,
                     Span o, Span c) {
  ChangeHunk h;
  h.original = o;
  h.corrected = c;
  h.kind = o.empty() ? HunkKind::insert : (c.empty() ? HunkKind::remove : HunkKind::replace);
  h.original_segment = join_words(original, o);
  h.corrected_segment = join_words(corrected, c);
  return h;
}

}  // namespace

std::vector<ChangeHunk> diff_words(std::span<const Word> original,
                                   std::span<const Word> corrected,
                                   const DiffOptions& options) {
  std::size_t prefix = 0;
  while (prefix < original.size() && prefix < corrected.size() &&
         original[prefix].text == corrected[prefix].text) {
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < original.size() - prefix && suffix < corrected.size() - prefix &&
         original[original.size() - 1 - suffix].text ==
             corrected[corrected.size() - 1 - suffix].text) {
    ++suffix;
  }
  const auto mid_a = original.subspan(prefix, original.size() - prefix - suffix);
  const auto mid_b = corrected.subspan(prefix, corrected.size() - prefix - suffix);
  if (mid_a.empty() && mid_b.empty()) return {};

  std::vector<Op> ops;
  if ((mid_a.size() + 1) * (mid_b.size() + 1) > options.max_cells) {
    ops.assign(mid_a.size(), Op::remove);
    ops.insert(ops.end(), mid_b.size(), Op::insert);
  } else {
    ops = align(mid_a, mid_b);
  }

  // Group maximal runs of non-matching ops into regions.
  struct Region {
    Span o, c;
  };
  std::vector<Region> regions;
  std::size_t i = prefix;
  std::size_t j = prefix;
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k] == Op::match) {
      ++i;
      ++j;
      ++k;
      continue;
    }
    Region r{{i, i}, {j, j}};
    while (k < ops.size() && ops[k] != Op::match) {
      if (ops[k] == Op::remove) {
        ++i;
      } else {
        ++j;
      }
      ++k;
    }
    r.o.end = i;
    r.c.end = j;
    regions.push_back(r);
  }

  std::vector<Region> merged;
  for (const auto& r : regions) {
    if (!merged.empty() && r.o.begin - merged.back().o.end <= options.merge_window) {
      merged.back().o.end = r.o.end;
      merged.back().c.end = r.c.end;
    } else {
      merged.push_back(r);
    }
  }

  std::vector<ChangeHunk> hunks;
  hunks.reserve(merged.size());
  for (const auto& r : merged) hunks.push_back(make_hunk(original, corrected, r.o, r.c));
  return hunks;
}

namespace {

struct Block {
  std::size_t a = 0, b = 0, size = 0;
};

Block longest_block(std::u32string_view a, std::u32string_view b, std::vector<uint32_t>& prev,
                    std::vector<uint32_t>& cur) {
  Block best;
  const std::size_t m = b.size();
  prev.assign(m + 1, 0);
  cur.assign(m + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    cur[0] = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (a[i] == b[j]) {
        const uint32_t len = prev[j] + 1;
        cur[j + 1] = len;
        // Strictly greater keeps the earliest end in `a`, hence the
        // earliest start, then the earliest start in `b`.
        if (len > best.size) best = {i + 1 - len, j + 1 - len, len};
      } else {
        cur[j + 1] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

std::size_t matching_characters(std::u32string_view a, std::u32string_view b) {
  thread_local std::vector<uint32_t> prev;
  thread_local std::vector<uint32_t> cur;
  std::size_t total = 0;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> stack;
  stack.emplace_back(0, a.size(), 0, b.size());
  while (!stack.empty()) {
    const auto [alo, ahi, blo, bhi] = stack.back();
    stack.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    const Block blk = longest_block(a.substr(alo, ahi - alo), b.substr(blo, bhi - blo), prev, cur);
    if (blk.size == 0) continue;
    total += blk.size;
    const std::size_t ai = alo + blk.a;
    const std::size_t bj = blo + blk.b;
    stack.emplace_back(ai + blk.size, ahi, bj + blk.size, bhi);
    stack.emplace_back(alo, ai, blo, bj);
  }
  return total;
}

double similarity_ratio(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(matching_characters(a, b)) / static_cast<double>(total);
}

double similarity_ratio(std::string_view a, std::string_view b) {
  return similarity_ratio(unicode::decode(a), unicode::decode(b));
}

}  // namespace histocr
