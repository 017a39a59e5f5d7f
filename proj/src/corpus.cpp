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

#include "histocr/corpus.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

#include "histocr/unicode.hpp"

namespace histocr {

using ordered_json = nlohmann::ordered_json;

std::optional<int> CorpusRecord::decade() const {
  if (!year) return std::nullopt;
  // Floor division so negative years still bucket downwards.
  const int y = *year;
  const int floor_div = (y >= 0) ? y / 10 : -((-y + 9) / 10);
  return floor_div * 10;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::surface_form: return "surface_form";
    case Label::ocr_error: return "ocr_error";
    case Label::hallucination: return "hallucination";
  }
  return "hallucination";
}

Label parse_label(std::string_view name) {
  if (name == "surface_form") return Label::surface_form;
  if (name == "ocr_error") return Label::ocr_error;
  if (name == "hallucination") return Label::hallucination;
  throw std::invalid_argument("unknown label: " + std::string(name));
}

std::string_view to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::pending: return "pending";
    case RecordStatus::cleaned_out: return "cleaned_out";
    case RecordStatus::excluded_content_policy: return "excluded_content_policy";
    case RecordStatus::excluded_llm_failure: return "excluded_llm_failure";
    case RecordStatus::corrected: return "corrected";
  }
  return "pending";
}

RecordStatus parse_status(std::string_view name) {
  if (name == "pending") return RecordStatus::pending;
  if (name == "cleaned_out") return RecordStatus::cleaned_out;
  if (name == "excluded_content_policy") return RecordStatus::excluded_content_policy;
  if (name == "excluded_llm_failure") return RecordStatus::excluded_llm_failure;
  if (name == "corrected") return RecordStatus::corrected;
  throw std::invalid_argument("unknown status: " + std::string(name));
}

namespace {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string required_string(const ordered_json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw FieldError(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const ordered_json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw FieldError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

void check_text(const std::string& text, const char* key) {
  if (text.find('\0') != std::string::npos) {
    throw FieldError(std::string("field '") + key + "' contains NUL");
  }
  if (!unicode::is_valid_utf8(text)) {
    throw FieldError(std::string("field '") + key + "' is not valid UTF-8");
  }
}

CorpusRecord record_from_json(const ordered_json& obj) {
  if (!obj.is_object()) throw FieldError("line is not a JSON object");
  CorpusRecord r;
  r.id = required_string(obj, "id");
  if (r.id.empty()) throw FieldError("field 'id' is empty");
  r.text = required_string(obj, "text");
  check_text(r.text, "text");
  r.newspaper = optional_string(obj, "newspaper").value_or("");
  r.country = optional_string(obj, "country").value_or("");
  r.city = optional_string(obj, "city");
  if (const auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw FieldError("field 'year' must be an integer");
    r.year = it->get<int>();
  }
  return r;
}

ordered_json span_json(Span s) { return ordered_json::array({s.begin, s.end}); }

Span span_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned()) {
    throw FieldError("span must be [begin, end]");
  }
  Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (s.end < s.begin) throw FieldError("span end precedes begin");
  return s;
}

ordered_json correction_json(const ClassifiedCorrection& c) {
  ordered_json j;
  j["original"] = c.original;
  j["corrected"] = c.corrected;
  j["label"] = to_string(c.label);
  j["rule"] = c.rule;
  j["ratio"] = c.ratio ? ordered_json(*c.ratio) : ordered_json(nullptr);
  j["accent_only"] = c.accent_only;
  j["frequency"] = c.frequency;
  j["position"] = {{"original", span_json(c.original_span)},
                   {"corrected", span_json(c.corrected_span)}};
  return j;
}

ClassifiedCorrection correction_from_json(const ordered_json& j) {
  if (!j.is_object()) throw FieldError("correction is not an object");
  ClassifiedCorrection c;
  c.original = required_string(j, "original");
  c.corrected = required_string(j, "corrected");
  try {
    c.label = parse_label(required_string(j, "label"));
  } catch (const std::invalid_argument& e) {
    throw FieldError(e.what());
  }
  c.rule = required_string(j, "rule");
  if (const auto it = j.find("ratio"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) throw FieldError("ratio must be a number");
    c.ratio = it->get<double>();
  }
  c.accent_only = j.value("accent_only", false);
  c.frequency = j.value("frequency", std::size_t{1});
  const auto pos = j.find("position");
  if (pos == j.end() || !pos->is_object()) throw FieldError("correction lacks position");
  c.original_span = span_from_json(pos->at("original"));
  c.corrected_span = span_from_json(pos->at("corrected"));
  return c;
}

ProcessedRecord processed_from_json(const ordered_json& obj) {
  ProcessedRecord p;
  p.source = record_from_json(obj);
  try {
    p.status = parse_status(obj.value("status", std::string("pending")));
  } catch (const std::invalid_argument& e) {
    throw FieldError(e.what());
  }
  p.cleaning_filter = optional_string(obj, "cleaning_filter");
  p.text_llm = optional_string(obj, "text_llm");
  if (p.text_llm) check_text(*p.text_llm, "text_llm");
  p.text_final = optional_string(obj, "text_final");
  p.detail = optional_string(obj, "detail");
  if (const auto it = obj.find("corrections"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw FieldError("corrections must be an array");
    for (const auto& c : *it) p.corrections.push_back(correction_from_json(c));
  }
  if (p.text_final.has_value() != (p.status == RecordStatus::corrected)) {
    throw FieldError("text_final must be present exactly when status is corrected");
  }
  return p;
}

template <typename Record, typename Parse>
LoadResult<Record> parse_lines(std::string_view content, Parse parse) {
  LoadResult<Record> result;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      Record rec = parse(ordered_json::parse(line));
      const std::string& id = [&]() -> const std::string& {
        if constexpr (std::is_same_v<Record, CorpusRecord>) {
          return rec.id;
        } else {
          return rec.source.id;
        }
      }();
      if (!ids.insert(id).second) {
        throw CorpusError("line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
      }
      const CorpusRecord& src = [&]() -> const CorpusRecord& {
        if constexpr (std::is_same_v<Record, CorpusRecord>) {
          return rec;
        } else {
          return rec.source;
        }
      }();
      if (src.year && (*src.year < kFirstYear || *src.year > kLastYear)) {
        result.diagnostics.push_back({line_no, Diagnostic::Severity::warning,
                                      "year " + std::to_string(*src.year) +
                                          " outside the target range"});
      }
      result.records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      result.diagnostics.push_back({line_no, Diagnostic::Severity::error, e.what()});
    } catch (const FieldError& e) {
      result.diagnostics.push_back({line_no, Diagnostic::Severity::error, e.what()});
    }
  }
  return result;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CorpusError("read failure on " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw CorpusError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw CorpusError("write failure on " + path.string());
}

LoadResult<CorpusRecord> parse_corpus(std::string_view content) {
  return parse_lines<CorpusRecord>(content, record_from_json);
}

LoadResult<ProcessedRecord> parse_processed(std::string_view content) {
  return parse_lines<ProcessedRecord>(content, processed_from_json);
}

LoadResult<CorpusRecord> load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path));
}

LoadResult<ProcessedRecord> load_processed(const std::filesystem::path& path) {
  return parse_processed(read_file(path));
}

std::string serialize(const ProcessedRecord& p) {
  const CorpusRecord& r = p.source;
  ordered_json j;
  j["id"] = r.id;
  j["newspaper"] = r.newspaper;
  j["country"] = r.country;
  j["city"] = r.city ? ordered_json(*r.city) : ordered_json(nullptr);
  j["year"] = r.year ? ordered_json(*r.year) : ordered_json(nullptr);
  j["text"] = r.text;
  j["status"] = to_string(p.status);
  j["cleaning_filter"] = p.cleaning_filter ? ordered_json(*p.cleaning_filter) : ordered_json(nullptr);
  j["text_llm"] = p.text_llm ? ordered_json(*p.text_llm) : ordered_json(nullptr);
  j["text_final"] = p.text_final ? ordered_json(*p.text_final) : ordered_json(nullptr);
  j["detail"] = p.detail ? ordered_json(*p.detail) : ordered_json(nullptr);
  auto corrections = ordered_json::array();
  for (const auto& c : p.corrections) corrections.push_back(correction_json(c));
  j["corrections"] = std::move(corrections);
  return j.dump();
}

ProcessedRecord parse_processed_line(std::string_view line) {
  try {
    return processed_from_json(ordered_json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError(e.what());
  } catch (const FieldError& e) {
    throw CorpusError(e.what());
  }
}

void write_output(std::span<const ProcessedRecord> records, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : records) {
    out += serialize(r);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace histocr
