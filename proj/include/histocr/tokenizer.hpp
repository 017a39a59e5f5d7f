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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace histocr {

/// Token counting used by the short-row filter and the run report.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string_view id() const = 0;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
  virtual std::size_t count(std::string_view text) const { return tokenize(text).size(); }
};

/// Maximal runs of letters and digits; punctuation and whitespace separate
/// tokens and are not tokens themselves.
class UnicodeWordTokenizer final : public Tokenizer {
 public:
  std::string_view id() const override { return "unicode-word"; }
  std::vector<std::string> tokenize(std::string_view text) const override;
  std::size_t count(std::string_view text) const override;
};

/// Whitespace-separated words, as seen by the diff engine.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::string_view id() const override { return "whitespace"; }
  std::vector<std::string> tokenize(std::string_view text) const override;
};

/// Throws std::invalid_argument for an unknown id.
std::unique_ptr<Tokenizer> make_tokenizer(std::string_view id);

}  // namespace histocr
