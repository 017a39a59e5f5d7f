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

#include "histocr/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <json.hpp>

namespace histocr {

namespace fs = std::filesystem;

namespace {

BackendKind parse_backend_kind(const std::string& s) {
  if (s == "mock") return BackendKind::mock;
  if (s == "http") return BackendKind::http;
  if (s == "identity") return BackendKind::identity;
  throw ConfigError("unknown backend kind '" + s + "'");
}

template <typename T>
void take(const nlohmann::json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

}  // namespace

void load_config_file(const fs::path& path, PipelineConfig& c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const CorpusError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path.string() + ": config must be a JSON object");
  try {
    if (const auto b = j.find("backend"); b != j.end() && b->is_object()) {
      std::string kind;
      take(*b, "kind", kind);
      if (!kind.empty()) c.backend.kind = parse_backend_kind(kind);
      std::string fixture;
      take(*b, "fixture", fixture);
      if (!fixture.empty()) c.backend.fixture = fixture;
      take(*b, "endpoint", c.backend.endpoint);
      take(*b, "model", c.backend.model);
      take(*b, "api_key_env", c.backend.api_key_env);
      take(*b, "auth_header", c.backend.auth_header);
      take(*b, "temperature", c.backend.temperature);
      take(*b, "timeout_seconds", c.backend.timeout_seconds);
    }
    take(j, "tokenizer", c.tokenizer);
    take(j, "min_tokens", c.cleaning.min_tokens);
    take(j, "max_nonalpha", c.cleaning.max_non_alpha);
    take(j, "ratio_threshold", c.thresholds.ratio_threshold);
    take(j, "max_words", c.thresholds.max_corrected_words);
    take(j, "promotion_min_frequency", c.thresholds.promotion_min_frequency);
    take(j, "promotion_band", c.thresholds.promotion_band);
    std::string rules;
    take(j, "rules", rules);
    if (!rules.empty()) c.rules_path = rules;
    take(j, "max_concurrency", c.max_concurrency);
    take(j, "retry_count", c.retry_count);
    take(j, "backoff_base_ms", c.backoff_base_ms);
    take(j, "backoff_max_ms", c.backoff_max_ms);
    take(j, "char_budget", c.char_budget);
    take(j, "global_hallucination_threshold", c.global_hallucination_threshold);
    take(j, "merge_window", c.merge_window);
    std::string lang;
    take(j, "prompt_language", lang);
    if (lang == "english") {
      c.prompt_language = PromptLanguage::english;
    } else if (lang == "spanish") {
      c.prompt_language = PromptLanguage::spanish;
    } else if (!lang.empty()) {
      throw ConfigError("prompt_language must be spanish or english");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_environment(PipelineConfig& c) {
  if (auto v = env("HISTOCR_BACKEND")) c.backend.kind = parse_backend_kind(*v);
  if (auto v = env("HISTOCR_ENDPOINT")) c.backend.endpoint = *v;
  if (auto v = env("HISTOCR_MODEL")) c.backend.model = *v;
  if (auto v = env("HISTOCR_FIXTURE")) c.backend.fixture = *v;
}

std::vector<std::string> validate(const PipelineConfig& c, bool need_input, bool need_backend) {
  std::vector<std::string> errors;
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(c.thresholds.ratio_threshold)) errors.push_back("ratio threshold must be in [0,1]");
  if (c.thresholds.max_corrected_words < 1) errors.push_back("max words must be at least 1");
  if (!in_unit(c.cleaning.max_non_alpha)) errors.push_back("max-nonalpha must be in [0,1]");
  if (!in_unit(c.global_hallucination_threshold)) {
    errors.push_back("global hallucination threshold must be in [0,1]");
  }
  if (c.thresholds.promotion_band < 0.0) errors.push_back("promotion band must be non-negative");
  if (c.max_concurrency < 1) errors.push_back("max concurrency must be at least 1");
  if (c.retry_count < 1) errors.push_back("retry count must be at least 1");
  if (c.backoff_base_ms < 0 || c.backoff_max_ms < c.backoff_base_ms) {
    errors.push_back("backoff must satisfy 0 <= base <= max");
  }
  if (c.char_budget < 1) errors.push_back("character budget must be at least 1");
  try {
    make_tokenizer(c.tokenizer);
  } catch (const std::invalid_argument& e) {
    errors.push_back(e.what());
  }
  if (c.rules_path && !fs::is_regular_file(*c.rules_path)) {
    errors.push_back("rules file not found: " + c.rules_path->string());
  }
  if (need_input && !fs::is_regular_file(c.input)) {
    errors.push_back("input file not found: " + c.input.string());
  }
  if (need_backend && !c.dry_run) {
    const auto& b = c.backend;
    if (b.kind == BackendKind::mock && b.fixture && !fs::is_regular_file(*b.fixture)) {
      errors.push_back("mock fixture not found: " + b.fixture->string());
    }
    if (b.kind == BackendKind::http) {
      if (b.endpoint.empty()) errors.push_back("HTTP backend needs an endpoint");
      if (b.model.empty()) errors.push_back("HTTP backend needs a model name");
      if (!b.api_key_env.empty() && !env(b.api_key_env.c_str())) {
        errors.push_back("API key variable " + b.api_key_env + " is not set");
      }
      if (b.timeout_seconds < 1) errors.push_back("timeout must be at least 1 second");
    }
  }
  return errors;
}

std::unique_ptr<CorrectionBackend> make_backend(const PipelineConfig& c) {
  if (c.dry_run) return std::make_unique<IdentityBackend>();
  const auto& b = c.backend;
  switch (b.kind) {
    case BackendKind::identity:
      return std::make_unique<IdentityBackend>();
    case BackendKind::mock:
      try {
        return std::make_unique<MockBackend>(b.fixture ? MockBackend::load(*b.fixture) : MockBackend());
      } catch (const CorpusError& e) {
        throw ConfigError(e.what());
      }
    case BackendKind::http: {
      HttpBackendSettings s;
      s.endpoint = b.endpoint;
      s.model = b.model;
      if (!b.api_key_env.empty()) {
        const auto key = env(b.api_key_env.c_str());
        if (!key) throw ConfigError("API key variable " + b.api_key_env + " is not set");
        s.api_key = *key;
      }
      s.auth_header = b.auth_header;
      s.temperature = b.temperature;
      s.timeout = std::chrono::seconds(b.timeout_seconds);
      try {
        return std::make_unique<HttpBackend>(std::move(s));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  throw ConfigError("unhandled backend kind");
}

ClientOptions client_options(const PipelineConfig& c) {
  ClientOptions o;
  o.prompt = c.prompt_language == PromptLanguage::english ? PromptTemplate::english()
                                                          : PromptTemplate::spanish();
  o.retry.max_attempts = c.retry_count;
  o.retry.base_delay = std::chrono::milliseconds(c.backoff_base_ms);
  o.retry.max_delay = std::chrono::milliseconds(c.backoff_max_ms);
  o.char_budget = c.char_budget;
  o.global_hallucination_threshold = c.global_hallucination_threshold;
  o.max_concurrency = c.max_concurrency;
  return o;
}

RuleTable load_rules(const PipelineConfig& c) {
  if (!c.rules_path) return RuleTable::defaults();
  RuleTable rules = RuleTable::load(*c.rules_path);
  for (const auto& f : self_test(rules, c.thresholds)) {
    spdlog::warn("{}: example {} -> {} for rule {} classifies as {} via '{}'", c.rules_path->string(),
                 f.row.example_original, f.row.example_corrected, f.row.id, to_string(f.got.label), f.got.rule);
  }
  return rules;
}

CleaningOutcome stage_clean(std::span<const CorpusRecord> records, const PipelineConfig& c) {
  const auto tokenizer = make_tokenizer(c.tokenizer);
  return clean_corpus(records, *tokenizer, c.cleaning);
}

void stage_correct(std::vector<ProcessedRecord>& records, CorrectionBackend& backend,
                   const PipelineConfig& c) {
  ClientCounters counters;
  correct_records(records, backend, client_options(c), &counters);
  spdlog::info("correct: {} ok, {} refused, {} transport errors, {} over length, {} whole-text "
               "hallucinations, {} attempts",
               counters.ok.load(), counters.refusals.load(), counters.transport_errors.load(),
               counters.over_length.load(), counters.global_hallucinations.load(),
               counters.attempts.load());
}

void stage_classify(std::vector<ProcessedRecord>& records, const RuleTable& rules,
                    const PipelineConfig& c) {
  DiffOptions diff_options;
  diff_options.merge_window = c.merge_window;
  FrequencyTable table;
  for (auto& p : records) {
    if (p.status != RecordStatus::pending || !p.text_llm) continue;
    p.corrections = classify_text(p.source.text, *p.text_llm, rules, c.thresholds, diff_options);
    for (const auto& corr : p.corrections) table.add(corr);
  }
  for (auto& p : records) {
    if (p.status != RecordStatus::pending || !p.text_llm) continue;
    backfill_frequencies(p.corrections, table);
    apply_frequency_promotion(p.corrections, c.thresholds);
  }
}

Lexicon stage_apply(std::vector<ProcessedRecord>& records, const PipelineConfig& c) {
  ApplyOptions options;
  options.modernize = c.modernize;
  std::vector<ClassifiedCorrection> all;
  for (auto& p : records) {
    if (p.status != RecordStatus::pending) continue;
    if (!p.text_llm) {
      p.status = RecordStatus::excluded_llm_failure;
      p.detail = "no LLM output";
      continue;
    }
    try {
      p.text_final = apply_corrections(p.source.text, *p.text_llm, p.corrections, options);
    } catch (const IntegrityError& e) {
      throw IntegrityError("record " + p.source.id + ": " + e.what());
    }
    p.status = RecordStatus::corrected;
    all.insert(all.end(), p.corrections.begin(), p.corrections.end());
  }
  return emit_lexicon(all);
}

std::size_t count_failures(std::span<const ProcessedRecord> records) {
  std::size_t n = 0;
  for (const auto& p : records) n += p.status == RecordStatus::excluded_llm_failure;
  return n;
}

RunResult run_pipeline(const PipelineConfig& c) {
  RunResult result;
  result.errors = validate(c, /*need_input=*/true, /*need_backend=*/true);
  if (!result.errors.empty()) {
    result.exit_code = exit_code::fatal;
    return result;
  }
  try {
    auto backend = make_backend(c);
    const RuleTable rules = load_rules(c);
    const auto tokenizer = make_tokenizer(c.tokenizer);

    auto loaded = load_corpus(c.input);
    for (const auto& d : loaded.diagnostics) {
      if (d.severity == Diagnostic::Severity::error) {
        ++result.diagnostics;
        spdlog::error("{}:{}: {}", c.input.string(), d.line, d.message);
      } else {
        spdlog::warn("{}:{}: {}", c.input.string(), d.line, d.message);
      }
    }

    const fs::path stages = c.output_dir / artifact::stage_dir;
    auto cleaned = stage_clean(loaded.records, c);
    std::vector<ProcessedRecord> records = cleaned.records;
    const std::vector<ProcessedRecord> cleaned_records = records;

    std::vector<ProcessedRecord> llm_records;
    const fs::path llm_path = stages / artifact::llm;
    if (c.resume && fs::is_regular_file(llm_path)) {
      auto prior = load_processed(llm_path);
      if (prior.has_errors()) throw CorpusError("cannot resume from damaged " + llm_path.string());
      llm_records = std::move(prior.records);
      spdlog::info("resumed LLM output from {}", llm_path.string());
    } else {
      stage_correct(records, *backend, c);
      llm_records = records;
    }
    records = llm_records;
    stage_classify(records, rules, c);
    const std::vector<ProcessedRecord> classified_records = records;
    const Lexicon lexicon = stage_apply(records, c);
    result.report = build_report(records, *tokenizer);

    const auto put = [&](const fs::path& p, const std::string& bytes) {
      write_file(p, bytes);
      result.artifacts.push_back(p);
    };
    const auto put_records = [&](const fs::path& p, std::span<const ProcessedRecord> rs) {
      write_output(rs, p);
      result.artifacts.push_back(p);
    };
    put_records(stages / artifact::cleaned, cleaned_records);
    put_records(llm_path, llm_records);
    put_records(stages / artifact::classified, classified_records);
    put_records(c.output_dir / artifact::corrected, records);
    put(c.output_dir / artifact::lexicon, lexicon_tsv(lexicon.full));
    put(c.output_dir / artifact::cleaning_report, cleaning_report_json(cleaned.report));
    put(c.output_dir / artifact::report, report_json(result.report));

    if (c.strict && (result.diagnostics > 0 || count_failures(records) > 0)) {
      result.exit_code = exit_code::partial;
    }
  } catch (const std::exception& e) {
    result.errors.emplace_back(e.what());
    result.exit_code = exit_code::fatal;
  }
  return result;
}

}  // namespace histocr
