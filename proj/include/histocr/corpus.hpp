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

/// Fatal corpus I/O or integrity failure (unreadable file, duplicate id).
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kFirstYear = 1800;
inline constexpr int kLastYear = 1899;

/// One newspaper text fragment with its provenance.
struct CorpusRecord {
  std::string id;
  std::string newspaper;
  std::string country;
  std::optional<std::string> city;
  std::optional<int> year;
  std::string text;

  std::optional<int> decade() const;
  bool operator==(const CorpusRecord&) const = default;
};

/// `pending` marks a record that survived cleaning and is still moving
/// through the stages. It never appears in a finished corpus.
enum class RecordStatus {
  pending,
  cleaned_out,
  excluded_content_policy,
  excluded_llm_failure,
  corrected,
};

std::string_view to_string(RecordStatus status);
RecordStatus parse_status(std::string_view name);

struct ProcessedRecord {
  CorpusRecord source;
  RecordStatus status = RecordStatus::pending;
  std::optional<std::string> cleaning_filter;
  std::optional<std::string> text_llm;
  std::optional<std::string> text_final;
  std::optional<std::string> detail;
  std::vector<ClassifiedCorrection> corrections;

  bool operator==(const ProcessedRecord&) const = default;
};

struct Diagnostic {
  enum class Severity { warning, error };
  std::size_t line = 0;
  Severity severity = Severity::error;
  std::string message;
};

template <typename Record>
struct LoadResult {
  std::vector<Record> records;
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const {
    for (const auto& d : diagnostics) {
      if (d.severity == Diagnostic::Severity::error) return true;
    }
    return false;
  }
};

/// Reads one JSON object per line. Malformed lines are skipped and
/// reported; an unreadable file or a duplicate id throws CorpusError.
LoadResult<CorpusRecord> load_corpus(const std::filesystem::path& path);
LoadResult<ProcessedRecord> load_processed(const std::filesystem::path& path);

LoadResult<CorpusRecord> parse_corpus(std::string_view content);
LoadResult<ProcessedRecord> parse_processed(std::string_view content);

std::string serialize(const ProcessedRecord& record);
ProcessedRecord parse_processed_line(std::string_view line);

/// One record per line with a fixed field order. Creates parent directories.
void write_output(std::span<const ProcessedRecord> records, const std::filesystem::path& path);

/// Writes the bytes to a file, creating parent directories; throws CorpusError.
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace histocr
