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

// histocr: post-OCR correction pipeline for historical newspaper text.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "histocr/pipeline.hpp"

namespace fs = std::filesystem;
using namespace histocr;

namespace {

// Flags shared by several subcommands. Unset values leave the config (and
// whatever --config or the environment put there) untouched.
struct Overrides {
  std::optional<std::string> backend;
  std::optional<std::string> fixture;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<std::string> api_key_env;
  std::optional<std::string> auth_header;
  std::optional<double> temperature;
  std::optional<int> timeout;
  std::optional<std::string> tokenizer;
  std::optional<std::size_t> min_tokens;
  std::optional<double> max_nonalpha;
  std::optional<double> ratio_threshold;
  std::optional<std::size_t> max_words;
  std::optional<std::string> rules;
  std::optional<std::size_t> max_concurrency;
  std::optional<int> retry_count;
  std::optional<std::size_t> char_budget;
  std::optional<double> global_threshold;
  std::optional<std::string> prompt_language;
  std::optional<std::size_t> merge_window;
  bool dry_run = false;
  bool modernize = false;
  bool resume = false;
};

void add_backend_flags(CLI::App* app, Overrides& o) {
  app->add_option("--backend", o.backend, "Correction backend")
      ->check(CLI::IsMember({"mock", "http", "identity"}));
  app->add_option("--fixture", o.fixture, "Mock backend fixture (JSONL)");
  app->add_option("--endpoint", o.endpoint, "Chat-completions URL for the http backend");
  app->add_option("--model", o.model, "Model name for the http backend");
  app->add_option("--api-key-env", o.api_key_env, "Environment variable holding the API key");
  app->add_option("--auth-header", o.auth_header, "Header carrying the API key");
  app->add_option("--temperature", o.temperature, "Sampling temperature");
  app->add_option("--timeout", o.timeout, "Request timeout in seconds");
  app->add_option("--max-concurrency", o.max_concurrency, "Requests in flight");
  app->add_option("--retry-count", o.retry_count, "Attempts per record");
  app->add_option("--char-budget", o.char_budget, "Longest text sent, in characters");
  app->add_option("--global-threshold", o.global_threshold,
                  "Whole-text similarity below which output is discarded");
  app->add_option("--prompt-language", o.prompt_language)->check(CLI::IsMember({"spanish", "english"}));
  app->add_flag("--dry-run", o.dry_run, "Use the identity backend; no requests are made");
}

void add_cleaning_flags(CLI::App* app, Overrides& o) {
  app->add_option("--min-tokens", o.min_tokens, "Texts with at most this many tokens are dropped");
  app->add_option("--max-nonalpha", o.max_nonalpha, "Largest non-alphabetic fraction kept");
  app->add_option("--tokenizer", o.tokenizer, "Tokenizer id")
      ->check(CLI::IsMember({"unicode-word", "whitespace"}));
}

void add_classify_flags(CLI::App* app, Overrides& o) {
  app->add_option("--rules", o.rules, "Rule table file");
  app->add_option("--ratio-threshold", o.ratio_threshold, "Similarity threshold");
  app->add_option("--max-words", o.max_words, "Largest corrected segment, in words");
  app->add_option("--merge-window", o.merge_window, "Unchanged words bridged between hunks");
}

void overlay(PipelineConfig& c, const Overrides& o) {
  if (o.backend) c.backend.kind = *o.backend == "http"       ? BackendKind::http
                                  : *o.backend == "identity" ? BackendKind::identity
                                                             : BackendKind::mock;
  if (o.fixture) c.backend.fixture = *o.fixture;
  if (o.endpoint) c.backend.endpoint = *o.endpoint;
  if (o.model) c.backend.model = *o.model;
  if (o.api_key_env) c.backend.api_key_env = *o.api_key_env;
  if (o.auth_header) c.backend.auth_header = *o.auth_header;
  if (o.temperature) c.backend.temperature = *o.temperature;
  if (o.timeout) c.backend.timeout_seconds = *o.timeout;
  if (o.tokenizer) c.tokenizer = *o.tokenizer;
  if (o.min_tokens) c.cleaning.min_tokens = *o.min_tokens;
  if (o.max_nonalpha) c.cleaning.max_non_alpha = *o.max_nonalpha;
  if (o.ratio_threshold) c.thresholds.ratio_threshold = *o.ratio_threshold;
  if (o.max_words) c.thresholds.max_corrected_words = *o.max_words;
  if (o.rules) c.rules_path = *o.rules;
  if (o.max_concurrency) c.max_concurrency = *o.max_concurrency;
  if (o.retry_count) c.retry_count = *o.retry_count;
  if (o.char_budget) c.char_budget = *o.char_budget;
  if (o.global_threshold) c.global_hallucination_threshold = *o.global_threshold;
  if (o.prompt_language) {
    c.prompt_language = *o.prompt_language == "english" ? PromptLanguage::english : PromptLanguage::spanish;
  }
  if (o.merge_window) c.merge_window = *o.merge_window;
  c.dry_run = c.dry_run || o.dry_run;
  c.modernize = c.modernize || o.modernize;
  c.resume = c.resume || o.resume;
}

bool report_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << '\n';
  return !errors.empty();
}

// Logs diagnostics; returns the number of malformed lines.
template <typename T>
std::size_t log_diagnostics(const fs::path& path, const LoadResult<T>& loaded) {
  std::size_t errors = 0;
  for (const auto& d : loaded.diagnostics) {
    if (d.severity == Diagnostic::Severity::error) {
      ++errors;
      spdlog::error("{}:{}: {}", path.string(), d.line, d.message);
    } else {
      spdlog::warn("{}:{}: {}", path.string(), d.line, d.message);
    }
  }
  return errors;
}

int finish(const PipelineConfig& c, std::size_t malformed, std::size_t failures) {
  if (c.strict && (malformed > 0 || failures > 0)) return exit_code::partial;
  return exit_code::success;
}

std::vector<ProcessedRecord> load_stage_input(const fs::path& path, std::size_t& malformed) {
  if (!fs::is_regular_file(path)) throw ConfigError("input file not found: " + path.string());
  auto loaded = load_processed(path);
  malformed = log_diagnostics(path, loaded);
  return std::move(loaded.records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-OCR correction of historical newspaper text"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  bool verbose = false;
  bool strict = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_flag("-v,--verbose", verbose, "Log progress");
  app.add_flag("--strict", strict, "Exit with status 2 when any record fails");
  app.fallthrough();

  Overrides o;
  std::string input;
  std::string output;
  std::string report_path;
  std::string output_dir;
  std::string original_path;
  std::string corrected_path;
  std::string lexicon_path;
  std::string lexicon_non_accent_path;
  std::string format = "text";

  auto* run = app.add_subcommand("run", "Run every stage and write all artifacts");
  run->add_option("--input", input, "Corpus JSONL")->required();
  run->add_option("--output-dir", output_dir, "Artifact directory")->required();
  add_backend_flags(run, o);
  add_cleaning_flags(run, o);
  add_classify_flags(run, o);
  run->add_flag("--modernize", o.modernize, "Also apply surface-form corrections");
  run->add_flag("--resume", o.resume, "Reuse LLM output from a previous run in the same directory");

  auto* clean = app.add_subcommand("clean", "Drop duplicate, empty, non-alphabetic and short texts");
  clean->add_option("--input", input, "Corpus JSONL")->required();
  clean->add_option("--output", output, "Processed JSONL")->required();
  clean->add_option("--report", report_path, "Cleaning report (JSON)");
  add_cleaning_flags(clean, o);

  auto* correct = app.add_subcommand("correct", "Send cleaned records to the correction backend");
  correct->add_option("--input", input, "Processed JSONL from clean")->required();
  correct->add_option("--output", output, "Processed JSONL with LLM output")->required();
  add_backend_flags(correct, o);

  auto* diff = app.add_subcommand("diff", "Print word-level hunks between two text files");
  diff->add_option("--original", original_path)->required()->check(CLI::ExistingFile);
  diff->add_option("--corrected", corrected_path)->required()->check(CLI::ExistingFile);
  diff->add_option("--merge-window", o.merge_window);

  auto* classify = app.add_subcommand("classify", "Label every correction in records with LLM output");
  classify->add_option("--input", input, "Processed JSONL from correct")->required();
  classify->add_option("--output", output, "Processed JSONL with corrections")->required();
  add_classify_flags(classify, o);

  auto* apply = app.add_subcommand("apply", "Build final texts and the surface-form lexicon");
  apply->add_option("--input", input, "Processed JSONL from classify")->required();
  apply->add_option("--output", output, "Corrected corpus JSONL")->required();
  apply->add_option("--lexicon", lexicon_path, "Surface-form lexicon (TSV)");
  apply->add_option("--lexicon-non-accent", lexicon_non_accent_path,
                    "Lexicon without accent-only entries (TSV)");
  apply->add_flag("--modernize", o.modernize, "Also apply surface-form corrections");

  auto* report = app.add_subcommand("report", "Summarize a processed corpus");
  report->add_option("--input", input, "Processed JSONL")->required();
  report->add_option("--out", output, "Report file; standard output when omitted");
  report->add_option("--format", format)->check(CLI::IsMember({"text", "structured"}));
  report->add_option("--tokenizer", o.tokenizer)->check(CLI::IsMember({"unicode-word", "whitespace"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_code::success : exit_code::fatal;
  }

  auto logger = spdlog::stderr_color_mt("histocr");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  PipelineConfig c;
  try {
    if (config_path) load_config_file(*config_path, c);
    apply_environment(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::fatal;
  }
  overlay(c, o);
  c.strict = strict;
  c.input = input;
  c.output_dir = output_dir;

  try {
    if (*run) {
      const RunResult r = run_pipeline(c);
      if (report_errors(r.errors)) return r.exit_code;
      std::cout << report_text(r.report);
      return r.exit_code;
    }

    if (*clean) {
      if (report_errors(validate(c, true, false))) return exit_code::fatal;
      auto loaded = load_corpus(c.input);
      const std::size_t malformed = log_diagnostics(c.input, loaded);
      const CleaningOutcome outcome = stage_clean(loaded.records, c);
      write_output(outcome.records, output);
      if (!report_path.empty()) write_file(report_path, cleaning_report_json(outcome.report));
      return finish(c, malformed, 0);
    }

    if (*correct) {
      if (report_errors(validate(c, true, true))) return exit_code::fatal;
      auto backend = make_backend(c);
      std::size_t malformed = 0;
      auto records = load_stage_input(c.input, malformed);
      stage_correct(records, *backend, c);
      write_output(records, output);
      return finish(c, malformed, count_failures(records));
    }

    if (*diff) {
      const std::string a = read_file(original_path);
      const std::string b = read_file(corrected_path);
      const auto wa = tokenize_words(a);
      const auto wb = tokenize_words(b);
      DiffOptions options;
      if (o.merge_window) options.merge_window = *o.merge_window;
      for (const auto& h : diff_words(wa, wb, options)) {
        std::cout << h.original.begin << '-' << h.original.end << '\t' << h.corrected.begin << '-'
                  << h.corrected.end << '\t' << to_string(h.kind) << '\t' << h.original_segment
                  << '\t' << h.corrected_segment << '\n';
      }
      return exit_code::success;
    }

    if (*classify) {
      if (report_errors(validate(c, true, false))) return exit_code::fatal;
      const RuleTable rules = load_rules(c);
      std::size_t malformed = 0;
      auto records = load_stage_input(c.input, malformed);
      stage_classify(records, rules, c);
      write_output(records, output);
      return finish(c, malformed, 0);
    }

    if (*apply) {
      if (report_errors(validate(c, true, false))) return exit_code::fatal;
      std::size_t malformed = 0;
      auto records = load_stage_input(c.input, malformed);
      const Lexicon lexicon = stage_apply(records, c);
      write_output(records, output);
      if (!lexicon_path.empty()) write_file(lexicon_path, lexicon_tsv(lexicon.full));
      if (!lexicon_non_accent_path.empty()) {
        write_file(lexicon_non_accent_path, lexicon_tsv(lexicon.non_accent));
      }
      return finish(c, malformed, count_failures(records));
    }

    if (*report) {
      if (report_errors(validate(c, true, false))) return exit_code::fatal;
      std::size_t malformed = 0;
      const auto records = load_stage_input(c.input, malformed);
      const auto tokenizer = make_tokenizer(c.tokenizer);
      const RunReport r = build_report(records, *tokenizer);
      const std::string text = format == "structured" ? report_json(r) : report_text(r);
      if (output.empty()) {
        std::cout << text;
      } else {
        write_file(output, text);
      }
      return finish(c, malformed, 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::fatal;
  }
  return exit_code::fatal;
}
