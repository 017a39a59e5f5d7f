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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/correction.hpp"

namespace histocr {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RuleKind { accent, substitution, enclitic };

/// One line of a rules file.
struct RuleRow {
  RuleKind kind = RuleKind::substitution;
  std::string from;
  std::string to;
  bool two_way = false;
  std::string example_original;
  std::string example_corrected;
  Label label = Label::surface_form;
  std::string id;
};

/// Letter-group substitution. The folded patterns have acute/grave accents
/// stripped and are what the matcher compares against.
struct SubstitutionRule {
  std::string id;
  std::u32string from;
  std::u32string to;
  bool two_way = false;
};

/// "stem + pronoun" written as "pronoun stem".
struct EncliticRule {
  std::string id;
  std::u32string pronoun;  // folded
};

class RuleTable {
 public:
  inline static constexpr int kFormatVersion = 1;

  static RuleTable parse(std::string_view text, std::string_view source = "<rules>");
  static RuleTable load(const std::filesystem::path& path);
  /// The shipped default table (data/default_rules.tsv, embedded at build time).
  static const RuleTable& defaults();
  static std::string_view default_text();

  std::span<const RuleRow> rows() const { return rows_; }
  std::span<const SubstitutionRule> surface_rules() const { return surface_; }
  std::span<const SubstitutionRule> ocr_rules() const { return ocr_; }
  std::span<const EncliticRule> enclitic_rules() const { return enclitic_; }

  std::size_t count(Label label) const;

 private:
  std::vector<RuleRow> rows_;
  std::vector<SubstitutionRule> surface_;
  std::vector<SubstitutionRule> ocr_;
  std::vector<EncliticRule> enclitic_;
};

/// Finds an explanation of `original` -> `corrected` as copies plus one or
/// more rule applications, using as few applications as possible. Returns
/// the distinct ids of the rules used, in order of first use; nullopt when
/// no such explanation exists or the strings are identical.
std::optional<std::vector<std::string>> match_substitutions(
    std::u32string_view original, std::u32string_view corrected,
    std::span<const SubstitutionRule> rules);

}  // namespace histocr
