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

#include "histocr/rules.hpp"

#include <gtest/gtest.h>

#include "histocr/classifier.hpp"
#include "histocr/corpus.hpp"
#include "histocr/unicode.hpp"
#include "support.hpp"

namespace histocr {
namespace {

constexpr std::string_view kHeader = "#! histocr-rules 1\n";

std::optional<std::vector<std::string>> match(std::string_view a, std::string_view b) {
  return match_substitutions(unicode::decode(a), unicode::decode(b),
                             RuleTable::defaults().surface_rules());
}

TEST(RuleTable, DefaultsHaveEveryRow) {
  const auto& t = RuleTable::defaults();
  EXPECT_EQ(t.count(Label::surface_form), 27u);
  EXPECT_EQ(t.count(Label::ocr_error), 7u);
  EXPECT_EQ(t.surface_rules().size(), 20u);
  EXPECT_EQ(t.enclitic_rules().size(), 2u);
  EXPECT_EQ(t.ocr_rules().size(), 7u);
  EXPECT_EQ(t.rows()[0].id, "accent_only");
  EXPECT_EQ(t.rows()[5].id, "table_i_y");
  EXPECT_TRUE(t.rows()[5].two_way);
  EXPECT_FALSE(t.rows()[12].two_way);
}

TEST(RuleTable, ShippedFileMatchesEmbeddedCopy) {
  const auto path = std::filesystem::path(HISTOCR_FIXTURES).parent_path().parent_path() / "data" /
                    "default_rules.tsv";
  EXPECT_EQ(read_file(path), RuleTable::default_text());
  EXPECT_EQ(RuleTable::load(path).rows().size(), RuleTable::defaults().rows().size());
}

TEST(RuleTable, SelfTestPassesOnDefaults) {
  const auto failures = self_test(RuleTable::defaults(), Thresholds{});
  for (const auto& f : failures) {
    ADD_FAILURE() << f.row.example_original << " -> " << f.row.example_corrected << " expected "
                  << f.row.id << ", got " << to_string(f.got.label) << " " << f.got.rule;
  }
}

TEST(RuleTable, ParseErrorsNameTheLine) {
  const auto expect_error = [](std::string_view text, std::string_view needle) {
    try {
      RuleTable::parse(text, "t.tsv");
      ADD_FAILURE() << "no error for: " << text;
    } catch (const RuleError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("", "header");
  expect_error("#! histocr-rules 2\n", "header");
  expect_error(std::string(kHeader) + "a|b\t<->\tx>y\n", "t.tsv:2");
  expect_error(std::string(kHeader) + "ab\t<->\tx>y\tsurface_form\n", "from|to");
  expect_error(std::string(kHeader) + "a|b\t<=>\tx>y\tsurface_form\n", "direction");
  expect_error(std::string(kHeader) + "a|b\t->\txy\tsurface_form\n", "example");
  expect_error(std::string(kHeader) + "a|b\t->\tx>y\tnoise\n", "label");
  expect_error(std::string(kHeader) + "a|b\t->\tx>y\thallucination\n", "hallucination");
  expect_error(std::string(kHeader) + "...lo|le ...\t->\tx>y\tsurface_form\n", "enclitic");
  expect_error(std::string(kHeader) + "an|án\t->\tx>y\tsurface_form\n", "identical");
  EXPECT_THROW(RuleTable::load("/nonexistent/rules.tsv"), RuleError);
}

TEST(RuleTable, CustomTable) {
  const auto t = RuleTable::parse(std::string(kHeader) +
                                  "# comment\n\nph|f\t->\tphilosofia>filosofia\tsurface_form\r\n"
                                  "8|B\t->\t8ogota>Bogota\tocr_error\n");
  ASSERT_EQ(t.rows().size(), 2u);
  EXPECT_EQ(t.rows()[0].id, "table_ph_f");
  EXPECT_EQ(t.rows()[1].id, "ocr_8_B");
  EXPECT_TRUE(self_test(t, Thresholds{}).empty());
}

TEST(MatchSubstitutions, SingleAndRepeatedRules) {
  EXPECT_EQ(match("mui", "muy"), (std::vector<std::string>{"table_i_y"}));
  EXPECT_EQ(match("muy", "mui"), (std::vector<std::string>{"table_i_y"}));  // two-way
  EXPECT_EQ(match("jenjibre", "gengibre"), (std::vector<std::string>{"table_j_g"}));
  EXPECT_EQ(match("cuatro", "quatro"), std::nullopt);                       // one-way
  EXPECT_EQ(match("mui", "mui"), std::nullopt);
  EXPECT_EQ(match("sefor", "senor"), std::nullopt);
}

TEST(MatchSubstitutions, CombinedRules) {
  EXPECT_EQ(match("kiosko", "quiosco"), (std::vector<std::string>{"table_k_qu", "table_k_c"}));
  const auto subs = match("suscriciones", "subscripciones");
  ASSERT_TRUE(subs);
  EXPECT_EQ(*subs, (std::vector<std::string>{"table_s_bs", "table_c_pc"}));
}

TEST(MatchSubstitutions, PrefersFewestApplications) {
  // senior -> señor is one ni->ñ application, not n->ñ plus a deletion.
  EXPECT_EQ(match("senior", "señor"), (std::vector<std::string>{"table_ni_ñ"}));
}

}  // namespace
}  // namespace histocr
