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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace histocr {

/// A whitespace-delimited word and its byte range in the source text.
struct Word {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Word&) const = default;
};

/// Half-open range of word indices.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool operator==(const Span&) const = default;
};

enum class HunkKind { replace, insert, remove };

std::string_view to_string(HunkKind kind);

/// One aligned change between the original and corrected word sequences.
/// Segments are the span's words joined by single spaces.
struct ChangeHunk {
  HunkKind kind = HunkKind::replace;
  Span original;
  Span corrected;
  std::string original_segment;
  std::string corrected_segment;

  bool operator==(const ChangeHunk&) const = default;
};

struct DiffOptions {
  // Changed regions separated by at most this many unchanged words are
  // merged into one hunk (the unchanged words become part of it).
  std::size_t merge_window = 0;
  // Above this many DP cells the differing middle is reported as a single
  // replace hunk instead of being aligned.
  std::size_t max_cells = std::size_t{1} << 26;
};

/// Splits on Unicode whitespace. Punctuation stays attached to its word.
std::vector<Word> tokenize_words(std::string_view text);

std::vector<ChangeHunk> diff_words(std::span<const Word> original,
                                   std::span<const Word> corrected,
                                   const DiffOptions& options = {});

std::string join_words(std::span<const Word> words, Span span);

/// Total size of the Ratcliff-Obershelp matching blocks: the longest common
/// contiguous block (ties: earliest in `a`, then earliest in `b`), plus the
/// blocks found recursively on both flanks.
std::size_t matching_characters(std::u32string_view a, std::u32string_view b);

/// 2*M / (|a| + |b|) over code points; 1.0 for two empty strings.
double similarity_ratio(std::u32string_view a, std::u32string_view b);
double similarity_ratio(std::string_view a, std::string_view b);

}  // namespace histocr
