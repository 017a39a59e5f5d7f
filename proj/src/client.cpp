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

#include "histocr/client.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <json.hpp>
#include <thread>

#include "histocr/diff.hpp"
#include "histocr/unicode.hpp"

namespace histocr {

namespace {

constexpr std::string_view kPlaceholder = "{text}";
constexpr std::string_view kFence = "```";

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string_view trim_ws(std::string_view s) {
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string template_text, PromptLanguage language)
    : template_text_(std::move(template_text)), language_(language) {
  if (count_occurrences(template_text_, kPlaceholder) != 1) {
    throw std::invalid_argument("prompt template needs exactly one {text} placeholder");
  }
}

PromptTemplate PromptTemplate::spanish() {
  return PromptTemplate(
      "Dado el texto del siglo XIX entre ```, retorna únicamente el texto corrigiendo los "
      "errores ortográficos sin cambiar la gramática. No corrijas la ortografía de nombres:\n"
      "```\n{text}\n```",
      PromptLanguage::spanish);
}

PromptTemplate PromptTemplate::english() {
  return PromptTemplate(
      "Given the 19th-century text between ```, return only the text with spelling errors "
      "corrected without changing the grammar. Do not correct the spelling of names:\n"
      "```\n{text}\n```",
      PromptLanguage::english);
}

std::string render_prompt(const PromptTemplate& tmpl, std::string_view text) {
  if (text.empty()) throw std::invalid_argument("cannot render a prompt for empty text");
  if (text.find(kFence) != std::string_view::npos) {
    spdlog::warn("record text contains a ``` fence; embedding it unescaped");
  }
  const std::string& t = tmpl.text();
  const std::size_t at = t.find(kPlaceholder);
  std::string out;
  out.reserve(t.size() + text.size());
  out.append(t, 0, at);
  out.append(text);
  out.append(t, at + kPlaceholder.size());
  return out;
}

std::string_view to_string(BackendOutcome outcome) {
  switch (outcome) {
    case BackendOutcome::ok: return "ok";
    case BackendOutcome::content_policy_refusal: return "content_policy_refusal";
    case BackendOutcome::transport_error: return "transport_error";
    case BackendOutcome::over_length: return "over_length";
  }
  return "transport_error";
}

BackendResult BackendResult::ok(std::string text) {
  BackendResult r;
  r.outcome = BackendOutcome::ok;
  r.corrected_text = std::move(text);
  return r;
}

BackendResult BackendResult::refusal(std::string detail) {
  BackendResult r;
  r.outcome = BackendOutcome::content_policy_refusal;
  r.detail = std::move(detail);
  return r;
}

BackendResult BackendResult::transport(std::string detail, bool retryable) {
  BackendResult r;
  r.outcome = BackendOutcome::transport_error;
  r.detail = std::move(detail);
  r.retryable = retryable;
  return r;
}

BackendResult BackendResult::over_length(std::string detail) {
  BackendResult r;
  r.outcome = BackendOutcome::over_length;
  r.detail = std::move(detail);
  return r;
}

BackendResult IdentityBackend::complete(const CorrectionRequest& request) {
  return BackendResult::ok(std::string(request.text));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

MockBackend MockBackend::parse(std::string_view fixture) {
  std::unordered_map<std::string, Entry> table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < fixture.size()) {
    std::size_t nl = fixture.find('\n', pos);
    if (nl == std::string_view::npos) nl = fixture.size();
    const std::string_view line = trim_ws(fixture.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Entry e;
      e.output = j.value("output", std::string());
      const std::string outcome = j.value("outcome", std::string("ok"));
      if (outcome == "content_policy_refusal") {
        e.outcome = BackendOutcome::content_policy_refusal;
      } else if (outcome == "transport_error") {
        e.outcome = BackendOutcome::transport_error;
      } else if (outcome != "ok") {
        throw CorpusError("unknown outcome '" + outcome + "'");
      }
      table[j.at("input_hash").get<std::string>()] = std::move(e);
    } catch (const nlohmann::json::exception& ex) {
      throw CorpusError("mock fixture line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const CorpusError& ex) {
      throw CorpusError("mock fixture line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return MockBackend(std::move(table));
}

MockBackend MockBackend::load(const std::filesystem::path& fixture) {
  return parse(read_file(fixture));
}

void MockBackend::add(std::string_view input_text, Entry entry) {
  table_[sha256_hex(input_text)] = std::move(entry);
}

BackendResult MockBackend::complete(const CorrectionRequest& request) {
  const auto it = table_.find(sha256_hex(request.text));
  if (it == table_.end()) return BackendResult::ok(std::string(request.text));
  switch (it->second.outcome) {
    case BackendOutcome::content_policy_refusal:
      return BackendResult::refusal("mock refusal");
    case BackendOutcome::transport_error:
      return BackendResult::transport("mock transport error", false);
    default:
      return BackendResult::ok(it->second.output);
  }
}

std::chrono::milliseconds RetryPolicy::delay_after(int attempt) const {
  auto delay = base_delay;
  for (int i = 1; i < attempt && delay < max_delay; ++i) delay *= 2;
  return std::min(delay, max_delay);
}

std::string strip_response(std::string_view response) {
  std::string_view s = trim_ws(response);
  if (s.starts_with(kFence)) {
    const std::size_t nl = s.find('\n');
    s = nl == std::string_view::npos ? s.substr(kFence.size()) : s.substr(nl + 1);
    s = trim_ws(s);
    if (s.ends_with(kFence)) s.remove_suffix(kFence.size());
  } else if (s.ends_with(kFence)) {
    s.remove_suffix(kFence.size());
  }
  return std::string(trim_ws(s));
}

BackendResult correct_text(const CorpusRecord& record, CorrectionBackend& backend,
                           const ClientOptions& options) {
  try {
    const std::size_t length = unicode::length(record.text);
    if (length > options.char_budget) {
      return BackendResult::over_length(std::to_string(length) + " characters exceed the budget of " +
                                        std::to_string(options.char_budget));
    }
    const std::string prompt = render_prompt(options.prompt, record.text);
    const int max_attempts = std::max(1, options.retry.max_attempts);
    BackendResult result;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
      try {
        result = backend.complete({record.text, prompt});
      } catch (const std::exception& e) {
        result = BackendResult::transport(e.what(), true);
      }
      result.attempts = attempt;
      if (result.outcome != BackendOutcome::transport_error || !result.retryable) break;
      if (attempt < max_attempts) {
        const auto delay = options.retry.delay_after(attempt);
        spdlog::debug("record {}: attempt {} failed ({}), retrying in {} ms", record.id, attempt,
                      result.detail, delay.count());
        if (options.sleep) {
          options.sleep(delay);
        } else {
          std::this_thread::sleep_for(delay);
        }
      }
    }
    if (result.outcome == BackendOutcome::ok) {
      if (!result.corrected_text) return BackendResult::transport("backend returned no text", false);
      result.corrected_text = strip_response(*result.corrected_text);
    } else {
      result.corrected_text.reset();
    }
    return result;
  } catch (const std::exception& e) {
    return BackendResult::transport(e.what(), false);
  }
}

bool detect_global_hallucination(std::string_view original, std::string_view corrected,
                                 double threshold) {
  return similarity_ratio(original, corrected) < threshold;
}

void correct_records(std::span<ProcessedRecord> records, CorrectionBackend& backend,
                     const ClientOptions& options, ClientCounters* counters) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].status == RecordStatus::pending) pending.push_back(i);
  }
  std::vector<BackendResult> results(pending.size());
  std::vector<char> hallucinated(pending.size(), 0);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < pending.size(); k = next.fetch_add(1)) {
      const CorpusRecord& rec = records[pending[k]].source;
      results[k] = correct_text(rec, backend, options);
      if (results[k].outcome == BackendOutcome::ok) {
        const std::string& out = *results[k].corrected_text;
        hallucinated[k] = out.empty() || detect_global_hallucination(
                                             rec.text, out, options.global_hallucination_threshold);
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.max_concurrency, 1, std::max<std::size_t>(1, pending.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < pending.size(); ++k) {
    ProcessedRecord& p = records[pending[k]];
    BackendResult& r = results[k];
    if (counters) counters->attempts += static_cast<std::size_t>(r.attempts);
    switch (r.outcome) {
      case BackendOutcome::ok:
        p.text_llm = std::move(r.corrected_text);
        if (hallucinated[k]) {
          p.status = RecordStatus::excluded_llm_failure;
          p.detail = "whole-text hallucination";
          if (counters) ++counters->global_hallucinations;
        } else if (counters) {
          ++counters->ok;
        }
        break;
      case BackendOutcome::content_policy_refusal:
        p.status = RecordStatus::excluded_content_policy;
        p.detail = r.detail;
        if (counters) ++counters->refusals;
        break;
      case BackendOutcome::over_length:
        p.status = RecordStatus::excluded_llm_failure;
        p.detail = "over_length: " + r.detail;
        if (counters) ++counters->over_length;
        break;
      case BackendOutcome::transport_error:
        p.status = RecordStatus::excluded_llm_failure;
        p.detail = "transport_error: " + r.detail;
        if (counters) ++counters->transport_errors;
        break;
    }
  }
}

}  // namespace histocr
