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

#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

namespace histocr {
namespace {

constexpr std::string_view kThree =
    R"({"id":"a","newspaper":"El Oso","country":"Peru","city":"Lima","year":1845,"text":"uno"})" "\n"
    R"({"id":"b","newspaper":"La Nacion","country":"Argentina","year":1873,"text":"dos"})" "\n"
    R"({"id":"c","text":"tres"})" "\n";

TEST(LoadCorpus, ThreeWellFormedLines) {
  const auto r = parse_corpus(kThree);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.records[0].city, "Lima");
  EXPECT_EQ(r.records[0].decade(), 1840);
  EXPECT_FALSE(r.records[1].city);
  EXPECT_EQ(r.records[2].newspaper, "");
  EXPECT_FALSE(r.records[2].year);
  EXPECT_FALSE(r.records[2].decade());
}

TEST(LoadCorpus, MalformedLineIsReportedAndSkipped) {
  const std::string content = std::string(kThree.substr(0, kThree.rfind('{'))) + "{not json\n";
  const auto r = parse_corpus(content);
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 3u);
  EXPECT_EQ(r.diagnostics[0].severity, Diagnostic::Severity::error);
  EXPECT_TRUE(r.has_errors());
}

TEST(LoadCorpus, EmptyFileGivesNothing) {
  const auto r = parse_corpus("");
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(parse_corpus("\n  \n").records.empty());
}

TEST(LoadCorpus, FieldValidation) {
  const char* bad[] = {
      R"({"text":"sin id"})",
      R"({"id":"x"})",
      R"({"id":"","text":"t"})",
      R"({"id":"x","text":5})",
      R"({"id":"x","text":"t","year":"1845"})",
      R"({"id":"x","text":"a\u0000b"})",
      R"(["id","x"])",
  };
  for (const char* line : bad) {
    const auto r = parse_corpus(line);
    EXPECT_TRUE(r.records.empty()) << line;
    EXPECT_TRUE(r.has_errors()) << line;
  }
  EXPECT_TRUE(parse_corpus("{\"id\":\"x\",\"text\":\"\xC3\"}").has_errors());
}

TEST(LoadCorpus, YearOutsideRangeWarns) {
  const auto r = parse_corpus(R"({"id":"x","text":"t","year":1901})");
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].severity, Diagnostic::Severity::warning);
  EXPECT_FALSE(r.has_errors());
}

TEST(LoadCorpus, DuplicateIdIsFatal) {
  EXPECT_THROW(parse_corpus(R"({"id":"x","text":"a"})" "\n" R"({"id":"x","text":"b"})"),
               CorpusError);
}

TEST(LoadCorpus, UnreadableFileIsFatal) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), CorpusError);
}

TEST(LoadCorpus, CrlfLinesAreAccepted) {
  const auto r = parse_corpus("{\"id\":\"x\",\"text\":\"a\"}\r\n");
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.diagnostics.empty());
}

ProcessedRecord sample() {
  ProcessedRecord p;
  p.source = {"r1", "El Oso", "Peru", "Lima", 1845, "cada se mana"};
  p.status = RecordStatus::corrected;
  p.text_llm = "cada semana";
  p.text_final = "cada semana";
  ClassifiedCorrection c;
  c.original = "se mana";
  c.corrected = "semana";
  c.label = Label::ocr_error;
  c.rule = "ratio_threshold";
  c.ratio = 12.0 / 13.0;
  c.frequency = 2;
  c.original_span = {1, 3};
  c.corrected_span = {1, 2};
  p.corrections.push_back(c);
  return p;
}

TEST(WriteOutput, FixedFieldOrder) {
  const std::string line = serialize(sample());
  const std::vector<std::string> order = {"\"id\"", "\"newspaper\"", "\"country\"", "\"city\"",
                                          "\"year\"", "\"text\"", "\"status\"",
                                          "\"cleaning_filter\"", "\"text_llm\"", "\"text_final\"",
                                          "\"detail\"", "\"corrections\""};
  std::size_t last = 0;
  for (const auto& key : order) {
    const std::size_t at = line.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GE(at, last) << key;
    last = at;
  }
  EXPECT_NE(line.find(R"("position":{"original":[1,3],"corrected":[1,2]})"), std::string::npos);
}

TEST(WriteOutput, RoundTrips) {
  const ProcessedRecord p = sample();
  EXPECT_EQ(parse_processed_line(serialize(p)), p);
}

TEST(WriteOutput, EmptySequenceGivesEmptyFile) {
  testing::TempDir dir;
  write_output({}, dir / "out.jsonl");
  EXPECT_EQ(read_file(dir / "out.jsonl"), "");
}

TEST(WriteOutput, RepeatedWritesAreByteIdentical) {
  testing::TempDir dir;
  const std::vector<ProcessedRecord> rs = {sample(), sample()};
  write_output(rs, dir / "nested" / "a.jsonl");
  write_output(rs, dir / "b.jsonl");
  EXPECT_EQ(read_file(dir / "nested" / "a.jsonl"), read_file(dir / "b.jsonl"));
  const std::string bytes = read_file(dir / "b.jsonl");
  EXPECT_EQ(std::count(bytes.begin(), bytes.end(), '\n'), 2);
}

TEST(ProcessedRecord, TextFinalPresentExactlyWhenCorrected) {
  ProcessedRecord p = sample();
  p.status = RecordStatus::excluded_llm_failure;
  EXPECT_THROW(parse_processed_line(serialize(p)), CorpusError);
  p = sample();
  p.text_final.reset();
  EXPECT_THROW(parse_processed_line(serialize(p)), CorpusError);
}

TEST(ProcessedRecord, StatusAndLabelNames) {
  for (auto s : {RecordStatus::pending, RecordStatus::cleaned_out, RecordStatus::excluded_content_policy,
                 RecordStatus::excluded_llm_failure, RecordStatus::corrected}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  for (auto l : {Label::surface_form, Label::ocr_error, Label::hallucination}) {
    EXPECT_EQ(parse_label(to_string(l)), l);
  }
  EXPECT_THROW(parse_status("done"), std::invalid_argument);
  EXPECT_THROW(parse_label("noise"), std::invalid_argument);
}

}  // namespace
}  // namespace histocr
