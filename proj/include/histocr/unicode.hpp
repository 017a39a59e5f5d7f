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

#include <string>
#include <string_view>

namespace histocr::unicode {

/// True when `bytes` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view bytes);

/// Decodes UTF-8 into code points. Ill-formed sequences become U+FFFD.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view code_points);
void append(std::string& out, char32_t cp);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_whitespace(char32_t cp);
/// Letters, combining marks and decimal digits. Everything else on a word
/// edge counts as punctuation.
bool is_word_char(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view text);

/// Base vowel for a vowel carrying an acute or grave accent; identity
/// otherwise. ñ and ü are distinct letters and are left untouched.
char32_t fold_accent(char32_t cp);
bool is_accent_mark(char32_t cp);

std::size_t length(std::string_view text);

}  // namespace histocr::unicode
