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

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/correction.hpp"
#include "histocr/diff.hpp"

namespace histocr {

/// Corrections that do not line up with the text they claim to come from.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replace the original words in `original` with the corrected words in
/// `corrected`. An empty original span inserts before that word index.
struct Edit {
  Span original;
  Span corrected;
};

/// Splices edits into the original bytes right to left. Bytes outside the
/// edited word ranges are copied unchanged; replaced ranges take the
/// corrected text's bytes verbatim. Edits must not overlap.
std::string apply_edits(std::string_view original, std::span<const Word> original_words,
                        std::string_view corrected, std::span<const Word> corrected_words,
                        std::vector<Edit> edits);

struct ApplyOptions {
  // Also apply surface forms (fully modernized text). Off by default:
  // surface forms belong to the historical text.
  bool modernize = false;
};

/// Applies the ocr_error corrections (plus surface forms when modernizing).
/// Throws IntegrityError when a correction's spans or words do not match.
std::string apply_corrections(std::string_view original, std::string_view corrected,
                              std::span<const ClassifiedCorrection> corrections,
                              const ApplyOptions& options = {});

struct SurfaceFormEntry {
  std::string original;
  std::string modern;
  std::string rule;
  std::size_t frequency = 0;
  bool accent_only = false;

  bool operator==(const SurfaceFormEntry&) const = default;
};

struct Lexicon {
  std::vector<SurfaceFormEntry> full;
  std::vector<SurfaceFormEntry> non_accent;
};

/// One entry per distinct surface-form pair; frequency counts occurrences
/// labeled surface_form. Both lists sorted by frequency desc, then original.
Lexicon emit_lexicon(std::span<const ClassifiedCorrection> corrections);

std::string lexicon_tsv(std::span<const SurfaceFormEntry> entries);

}  // namespace histocr
