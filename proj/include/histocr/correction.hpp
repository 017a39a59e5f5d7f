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
#include <optional>
#include <string>
#include <string_view>

#include "histocr/diff.hpp"

namespace histocr {

enum class Label { surface_form, ocr_error, hallucination };

std::string_view to_string(Label label);
/// Throws std::invalid_argument on an unknown name.
Label parse_label(std::string_view name);

/// Verdict for one classification unit of a change hunk.
struct ClassifiedCorrection {
  std::string original;   // lowercased, edge punctuation stripped
  std::string corrected;  // same normalization
  Label label = Label::hallucination;
  std::string rule;
  std::optional<double> ratio;
  bool accent_only = false;
  std::size_t frequency = 1;
  Span original_span;
  Span corrected_span;

  bool operator==(const ClassifiedCorrection&) const = default;
};

namespace rule_id {
inline constexpr std::string_view insert_delete = "insert_delete";
inline constexpr std::string_view punctuation_spacing = "punctuation_spacing";
inline constexpr std::string_view case_only = "case_only";
inline constexpr std::string_view accent_only = "accent_only";
inline constexpr std::string_view equal_length = "equal_length";
inline constexpr std::string_view ratio_threshold = "ratio_threshold";
inline constexpr std::string_view frequency_promotion = "frequency_promotion";
}  // namespace rule_id

}  // namespace histocr
