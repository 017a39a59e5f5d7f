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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "histocr/corpus.hpp"

namespace histocr {

enum class PromptLanguage { spanish, english };

/// Instruction text with exactly one {text} placeholder.
class PromptTemplate {
 public:
  /// Throws std::invalid_argument unless there is exactly one placeholder.
  PromptTemplate(std::string template_text, PromptLanguage language);

  static PromptTemplate spanish();
  static PromptTemplate english();

  const std::string& text() const { return template_text_; }
  PromptLanguage language() const { return language_; }

 private:
  std::string template_text_;
  PromptLanguage language_;
};

/// Substitutes `text` verbatim (no escaping). Throws std::invalid_argument
/// for empty text.
std::string render_prompt(const PromptTemplate& tmpl, std::string_view text);

enum class BackendOutcome { ok, content_policy_refusal, transport_error, over_length };

std::string_view to_string(BackendOutcome outcome);

struct BackendResult {
  BackendOutcome outcome = BackendOutcome::transport_error;
  std::optional<std::string> corrected_text;  // present iff outcome == ok
  std::string detail;
  bool retryable = false;  // transport errors that may succeed on retry
  int attempts = 0;

  static BackendResult ok(std::string text);
  static BackendResult refusal(std::string detail);
  static BackendResult transport(std::string detail, bool retryable);
  static BackendResult over_length(std::string detail);
};

struct CorrectionRequest {
  std::string_view text;
  std::string_view prompt;
};

/// A model that returns a corrected text. Implementations must be safe to
/// call from several threads at once.
class CorrectionBackend {
 public:
  virtual ~CorrectionBackend() = default;
  virtual std::string_view name() const = 0;
  virtual BackendResult complete(const CorrectionRequest& request) = 0;
};

/// Returns the input text unchanged.
class IdentityBackend final : public CorrectionBackend {
 public:
  std::string_view name() const override { return "identity"; }
  BackendResult complete(const CorrectionRequest& request) override;
};

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Replays responses keyed by the SHA-256 of the record text. Fixture lines:
/// {"input_hash": "...", "output": "..."} with an optional "outcome" of
/// "content_policy_refusal" or "transport_error". Unknown inputs echo.
class MockBackend final : public CorrectionBackend {
 public:
  struct Entry {
    BackendOutcome outcome = BackendOutcome::ok;
    std::string output;
  };

  MockBackend() = default;
  explicit MockBackend(std::unordered_map<std::string, Entry> table) : table_(std::move(table)) {}
  /// Throws CorpusError on unreadable or malformed fixtures.
  static MockBackend load(const std::filesystem::path& fixture);
  static MockBackend parse(std::string_view fixture);

  void add(std::string_view input_text, Entry entry);
  std::size_t size() const { return table_.size(); }

  std::string_view name() const override { return "mock"; }
  BackendResult complete(const CorrectionRequest& request) override;

 private:
  std::unordered_map<std::string, Entry> table_;
};

struct HttpBackendSettings {
  std::string endpoint;  // full chat-completions URL
  std::string model;
  std::string api_key;
  std::string auth_header = "Authorization";  // "api-key" for Azure
  double temperature = 0.0;
  std::chrono::seconds timeout{120};
};

/// OpenAI-compatible chat-completions client. Refusals are recognized from
/// content-filter error codes and finish reasons.
class HttpBackend final : public CorrectionBackend {
 public:
  /// Throws std::invalid_argument for a malformed endpoint or missing model.
  explicit HttpBackend(HttpBackendSettings settings);
  std::string_view name() const override { return "http"; }
  BackendResult complete(const CorrectionRequest& request) override;

  /// Maps an HTTP status and body to a result. Exposed for testing.
  static BackendResult interpret(int status, std::string_view body);

 private:
  HttpBackendSettings settings_;
  std::string origin_;
  std::string path_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{8000};

  /// Delay before attempt `attempt + 1` (attempt is 1-based).
  std::chrono::milliseconds delay_after(int attempt) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct ClientOptions {
  PromptTemplate prompt = PromptTemplate::spanish();
  RetryPolicy retry;
  std::size_t char_budget = 8000;  // code points; longer texts are not sent
  double global_hallucination_threshold = 0.5;
  std::size_t max_concurrency = 4;
  Sleeper sleep;  // defaults to std::this_thread::sleep_for
};

/// Removes a surrounding ``` fence (with optional language tag) and
/// leading/trailing whitespace. Nothing else is touched.
std::string strip_response(std::string_view response);

/// One record through the backend with retries. Never throws.
BackendResult correct_text(const CorpusRecord& record, CorrectionBackend& backend,
                           const ClientOptions& options);

/// True when the whole-text similarity falls below the threshold.
bool detect_global_hallucination(std::string_view original, std::string_view corrected,
                                 double threshold);

struct ClientCounters {
  std::atomic<std::size_t> ok{0};
  std::atomic<std::size_t> refusals{0};
  std::atomic<std::size_t> transport_errors{0};
  std::atomic<std::size_t> over_length{0};
  std::atomic<std::size_t> global_hallucinations{0};
  std::atomic<std::size_t> attempts{0};
};

/// Sends every pending record to the backend with up to max_concurrency
/// requests in flight, then updates statuses in input order: refusals become
/// excluded_content_policy; failures, over-length texts and whole-text
/// hallucinations become excluded_llm_failure; successes keep pending with
/// text_llm set.
void correct_records(std::span<ProcessedRecord> records, CorrectionBackend& backend,
                     const ClientOptions& options, ClientCounters* counters = nullptr);

}  // namespace histocr
