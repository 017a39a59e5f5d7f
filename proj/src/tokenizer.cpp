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

#include "histocr/tokenizer.hpp"

#include <stdexcept>

#include "histocr/diff.hpp"
#include "histocr/unicode.hpp"

namespace histocr {

std::vector<std::string> UnicodeWordTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_word_char(cp)) {
      unicode::append(current, cp);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t UnicodeWordTokenizer::count(std::string_view text) const {
  std::size_t n = 0;
  bool inside = false;
  for (char32_t cp : unicode::decode(text)) {
    const bool word = unicode::is_word_char(cp);
    if (word && !inside) ++n;
    inside = word;
  }
  return n;
}

std::vector<std::string> WhitespaceTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  for (auto& w : tokenize_words(text)) out.push_back(std::move(w.text));
  return out;
}

std::unique_ptr<Tokenizer> make_tokenizer(std::string_view id) {
  if (id == "unicode-word") return std::make_unique<UnicodeWordTokenizer>();
  if (id == "whitespace") return std::make_unique<WhitespaceTokenizer>();
  throw std::invalid_argument("unknown tokenizer: " + std::string(id));
}

}  // namespace histocr
