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
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "histocr/applier.hpp"
#include "histocr/classifier.hpp"
#include "histocr/cleaning.hpp"
#include "histocr/client.hpp"
#include "histocr/corpus.hpp"
#include "histocr/report.hpp"
#include "histocr/rules.hpp"

namespace histocr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BackendKind { mock, http, identity };

struct BackendConfig {
  BackendKind kind = BackendKind::mock;
  std::optional<std::filesystem::path> fixture;
  std::string endpoint;
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::string auth_header = "Authorization";
  double temperature = 0.0;
  int timeout_seconds = 120;
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  BackendConfig backend;
  std::string tokenizer = "unicode-word";
  CleaningOptions cleaning;
  Thresholds thresholds;
  std::optional<std::filesystem::path> rules_path;
  std::size_t max_concurrency = 4;
  int retry_count = 3;
  int backoff_base_ms = 500;
  int backoff_max_ms = 8000;
  std::size_t char_budget = 8000;
  double global_hallucination_threshold = 0.5;
  PromptLanguage prompt_language = PromptLanguage::spanish;
  std::size_t merge_window = 0;
  bool strict = false;
  bool dry_run = false;
  bool modernize = false;
  bool resume = false;
};

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int fatal = 1;
inline constexpr int partial = 2;
}  // namespace exit_code

/// Overlays a JSON config file onto `config`. Throws ConfigError.
void load_config_file(const std::filesystem::path& path, PipelineConfig& config);
/// Overlays HISTOCR_BACKEND / HISTOCR_ENDPOINT / HISTOCR_MODEL / HISTOCR_FIXTURE.
void apply_environment(PipelineConfig& config);

/// Every problem with the settings, not just the first. `need_input` and
/// `need_backend` select the checks that apply to the calling stage.
std::vector<std::string> validate(const PipelineConfig& config, bool need_input, bool need_backend);

/// Backend named by the config; the identity backend under dry_run.
/// Throws ConfigError on misconfiguration.
std::unique_ptr<CorrectionBackend> make_backend(const PipelineConfig& config);
ClientOptions client_options(const PipelineConfig& config);
RuleTable load_rules(const PipelineConfig& config);

CleaningOutcome stage_clean(std::span<const CorpusRecord> records, const PipelineConfig& config);
void stage_correct(std::vector<ProcessedRecord>& records, CorrectionBackend& backend,
                   const PipelineConfig& config);
/// Diff and classify every pending record that has LLM output, then count
/// pair frequencies across the whole corpus.
void stage_classify(std::vector<ProcessedRecord>& records, const RuleTable& rules,
                    const PipelineConfig& config);
/// Builds text_final for classified records and collects the lexicon.
Lexicon stage_apply(std::vector<ProcessedRecord>& records, const PipelineConfig& config);

/// Number of records with partial failures (excluded_llm_failure).
std::size_t count_failures(std::span<const ProcessedRecord> records);

namespace artifact {
inline constexpr std::string_view corrected = "corrected.jsonl";
inline constexpr std::string_view lexicon = "lexicon.tsv";
inline constexpr std::string_view cleaning_report = "cleaning_report.json";
inline constexpr std::string_view report = "report.json";
inline constexpr std::string_view stage_dir = "stages";
inline constexpr std::string_view cleaned = "cleaned.jsonl";
inline constexpr std::string_view llm = "llm.jsonl";
inline constexpr std::string_view classified = "classified.jsonl";
}  // namespace artifact

struct RunResult {
  int exit_code = exit_code::success;
  std::vector<std::string> errors;
  std::vector<std::filesystem::path> artifacts;
  std::size_t diagnostics = 0;
  RunReport report;
};

/// clean -> correct -> classify -> apply -> report. Nothing is written when
/// a fatal error occurs before the artifacts are complete.
RunResult run_pipeline(const PipelineConfig& config);

}  // namespace histocr
