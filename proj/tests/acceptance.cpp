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

// Acceptance checks, one line per criterion. Exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <random>
#include <spdlog/spdlog.h>
#include <sstream>

#include "histocr/pipeline.hpp"
#include "histocr/tokenizer.hpp"
#include "support.hpp"

namespace {

using namespace histocr;
using histocr::testing::fixture;
using histocr::testing::TempDir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

Outcome ratio_anchors() {
  Outcome o;
  const double r1 = similarity_ratio(std::string_view("ascripeión"), std::string_view("suscripción"));
  const double r2 = similarity_ratio(std::string_view("que"), std::string_view("como"));
  if (std::abs(r1 - 0.76) > 0.005) fail(o, "ascripeión/suscripción = " + std::to_string(r1));
  if (r2 != 0.0) fail(o, "que/como = " + std::to_string(r2));
  if (o.pass) o.detail = "ratios " + std::to_string(r1) + ", " + std::to_string(r2);
  return o;
}

Outcome golden_example() {
  struct Expect {
    std::string original;
    std::string corrected;
    Label label;
    std::size_t count;
  };
  const std::vector<Expect> expected = {
      {"publicacion", "publicación", Label::surface_form, 1},
      {"harà", "hará", Label::surface_form, 1},
      {"gravados", "grabados", Label::surface_form, 1},
      {"periodico", "periódico", Label::surface_form, 1},
      {"politica", "política", Label::surface_form, 1},
      {"sesion", "sesión", Label::surface_form, 2},
      {"á", "a", Label::surface_form, 2},
      {"ménos", "menos", Label::surface_form, 1},
      {"à", "a", Label::surface_form, 2},
      {"ocasion", "ocasión", Label::surface_form, 1},
      {"dió", "dio", Label::surface_form, 1},
      {"urjía", "urgía", Label::surface_form, 1},
      {"decia", "decía", Label::surface_form, 1},
      {"se mana", "semana", Label::ocr_error, 1},
      {"à mas", "además", Label::ocr_error, 1},
      {"loexija", "lo exija", Label::ocr_error, 1},
      {"asuntode", "asunto de", Label::ocr_error, 1},
      {"dore", "dos", Label::ocr_error, 1},
      {"en seguida", "enseguida", Label::ocr_error, 1},
  };
  Outcome o;
  const auto units = classify_text(read_file(fixture("golden_original.txt")),
                                   read_file(fixture("golden_corrected.txt")), RuleTable::defaults(),
                                   Thresholds{});
  std::size_t pairs = 0;
  for (const auto& e : expected) {
    std::size_t seen = 0;
    for (const auto& u : units) {
      if (u.original != e.original || u.corrected != e.corrected) continue;
      ++seen;
      if (u.label != e.label) {
        fail(o, e.original + " -> " + e.corrected + " labelled " + std::string(to_string(u.label)));
      }
    }
    if (seen != e.count) fail(o, e.original + " -> " + e.corrected + " seen " + std::to_string(seen) + " times");
    pairs += e.count;
  }
  if (o.pass) o.detail = std::to_string(pairs) + " marked pairs agree (" + std::to_string(units.size()) + " units)";
  return o;
}

Outcome rule_table() {
  struct Expect {
    std::string original;
    std::string corrected;
    std::string rule;
  };
  const std::vector<Expect> surface = {
      {"hara", "hará", "accent_only"},
      {"fué", "fue", "accent_only"},
      {"decia", "decía", "accent_only"},
      {"ocasion", "ocasión", "accent_only"},
      {"ningun", "ningún", "accent_only"},
      {"mui", "muy", "table_i_y"},
      {"jente", "gente", "table_j_g"},
      {"gravado", "grabado", "table_v_b"},
      {"espiró", "expiró", "table_s_x"},
      {"méjico", "méxico", "table_j_x"},
      {"faces", "fases", "table_c_s"},
      {"dies", "diez", "table_s_z"},
      {"doze", "doce", "table_z_c"},
      {"quatro", "cuatro", "table_q_c"},
      {"senor", "señor", "table_n_ñ"},
      {"senior", "señor", "table_ni_ñ"},
      {"nikel", "níquel", "table_k_qu"},
      {"kiosko", "quiosco", "table_k_c"},
      {"boulevar", "bulevar", "table_ou_u"},
      {"suscriciones", "subscripciones", "table_s_bs"},
      {"suscriciones", "subscripciones", "table_c_pc"},
      {"trasportar", "transportar", "table_s_ns"},
      {"setiembre", "septiembre", "table_t_pt"},
      {"libertar", "liberar", "table_rt_r"},
      {"vireinato", "virreinato", "table_r_rr"},
      {"cambiólo", "lo cambió", "enclitic_lo"},
      {"acercóse", "se acercó", "enclitic_se"},
  };
  Outcome o;
  const RuleTable& rules = RuleTable::defaults();
  for (const auto& e : surface) {
    const auto c = classify_pair(e.original, e.corrected, rules, Thresholds{});
    const auto ids = rule_ids(c.rule);
    if (c.label != Label::surface_form || std::find(ids.begin(), ids.end(), e.rule) == ids.end()) {
      fail(o, e.original + " -> " + e.corrected + ": " + std::string(to_string(c.label)) + " via " + c.rule);
    }
  }
  for (const auto& [a, b] : {std::pair{"In", "la"}, std::pair{"sefor", "señor"}}) {
    const auto c = classify_pair(a, b, rules, Thresholds{});
    if (c.label != Label::ocr_error) {
      fail(o, std::string(a) + " -> " + b + ": " + std::string(to_string(c.label)) + " via " + c.rule);
    }
  }
  if (!self_test(rules, Thresholds{}).empty()) fail(o, "shipped rules fail their self-test");
  if (o.pass) o.detail = std::to_string(surface.size()) + " surface pairs and 2 OCR pairs";
  return o;
}

Outcome cleaning_filters() {
  Outcome o;
  const auto loaded = load_corpus(fixture("cleaning100.jsonl"));
  const UnicodeWordTokenizer tokenizer;
  const auto out = clean_corpus(loaded.records, tokenizer);
  const auto& r = out.report;
  if (loaded.records.size() != 100 || r.total_rows != 100) fail(o, "fixture does not hold 100 records");
  if (r.removed_duplicate_or_empty != 15) fail(o, "duplicate/empty " + std::to_string(r.removed_duplicate_or_empty));
  if (r.removed_non_alpha != 8) fail(o, "non-alphabetic " + std::to_string(r.removed_non_alpha));
  if (r.removed_short != 6) fail(o, "short " + std::to_string(r.removed_short));
  if (r.surviving != 71) fail(o, "surviving " + std::to_string(r.surviving));
  bool boundary_kept = false;
  for (const auto& p : out.records) {
    if (p.source.text == "12 34 56 ab cd ef") boundary_kept = p.status == RecordStatus::pending;
  }
  if (!boundary_kept) fail(o, "50% non-alphabetic boundary record was removed");
  if (o.pass) o.detail = "15/8/6 removed, 71 kept, boundary kept";
  return o;
}

Outcome reconstruction() {
  Outcome o;
  std::mt19937_64 rng(20260101);
  constexpr int kCases = 1000;
  int failures = 0;
  for (int i = 0; i < kCases; ++i) {
    const bool irregular = i % 2 == 1;
    const auto pair = testing::random_pair(rng, irregular);
    const std::string err = testing::check_reconstruction(pair, !irregular);
    if (!err.empty()) {
      ++failures;
      fail(o, "case " + std::to_string(i) + ": " + err);
    }
  }
  o.detail = std::to_string(kCases) + " cases, " + std::to_string(failures) + " failures" +
             (o.pass ? "" : "; first: " + o.detail);
  return o;
}

Outcome determinism() {
  Outcome o;
  TempDir a;
  TempDir b;
  for (const auto* dir : {&a, &b}) {
    PipelineConfig c;
    c.input = fixture("corpus20.jsonl");
    c.output_dir = dir->path();
    c.backend.fixture = fixture("mock20.jsonl");
    const auto r = run_pipeline(c);
    if (r.exit_code != exit_code::success) fail(o, "pipeline exit code " + std::to_string(r.exit_code));
  }
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    if (!std::filesystem::exists(b.path() / rel) || read_file(e.path()) != read_file(b.path() / rel)) {
      fail(o, rel.string() + " differs");
    }
  }
  if (files == 0) fail(o, "no artifacts written");
  if (o.pass) o.detail = std::to_string(files) + " artifacts byte-identical";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::vector<std::u32string> strings{U""};
  for (std::size_t from = 0; strings.back().size() < 8;) {
    const std::size_t to = strings.size();
    for (std::size_t i = from; i < to; ++i) {
      for (char32_t c : {U'a', U'b', U'c'}) strings.push_back(strings[i] + c);
    }
    from = to;
  }
  const auto start = std::chrono::steady_clock::now();
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      ++pairs;
      const double got = similarity_ratio(a, b);
      const double want = testing::oracle_ratio(a, b);
      if (std::abs(got - want) > 1e-9) {
        if (++mismatches == 1) {
          std::string sa(a.begin(), a.end());
          std::string sb(b.begin(), b.end());
          fail(o, "'" + sa + "' vs '" + sb + "': " + std::to_string(got) + " vs " + std::to_string(want));
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream s;
  s << strings.size() << " strings, " << pairs << " pairs, " << mismatches << " mismatches, " << secs << " s";
  o.detail = s.str() + (o.pass ? "" : "; first: " + o.detail);
  return o;
}

Outcome report_structure() {
  Outcome o;
  TempDir dir;
  PipelineConfig c;
  c.input = fixture("corpus20.jsonl");
  c.output_dir = dir.path();
  c.backend.fixture = fixture("mock20.jsonl");
  const auto run = run_pipeline(c);
  const RunReport& r = run.report;
  if (run.exit_code != exit_code::success) fail(o, "pipeline failed");

  // Counts partition and percentages follow from them.
  if (r.rows != r.cleaning.surviving || r.input_rows != r.cleaning.total_rows) fail(o, "row counts disagree");
  if (r.corrected_rows + r.content_policy_excluded + r.llm_failure_excluded != r.rows) {
    fail(o, "record statuses do not partition the rows");
  }
  if (r.ocr_error_corrections + r.hallucination_corrections + r.surface_form_corrections != r.total_corrections) {
    fail(o, "label counts do not sum to the total");
  }
  const auto pct = [](std::size_t n, std::size_t d) { return d == 0 ? 0.0 : 100.0 * n / d; };
  if (r.total_corrections == 0) fail(o, "fixture produced no corrections");
  if (std::abs(r.pct_ocr_error - pct(r.ocr_error_corrections, r.total_corrections)) > 1e-9 ||
      std::abs(r.pct_hallucination - pct(r.hallucination_corrections, r.total_corrections)) > 1e-9 ||
      std::abs(r.pct_surface_form - pct(r.surface_form_corrections, r.total_corrections)) > 1e-9) {
    fail(o, "label percentages inconsistent");
  }
  if (std::abs(r.pct_content_policy_excluded - pct(r.content_policy_excluded, r.rows)) > 1e-9) {
    fail(o, "content-policy percentage inconsistent");
  }
  if (r.non_accent_surface_forms > r.surface_forms) fail(o, "non-accent surface forms exceed surface forms");

  // The report rebuilt from the written records matches the written report.
  const auto records = load_processed(dir / std::string(artifact::corrected)).records;
  const RunReport again = build_report(records, UnicodeWordTokenizer{});
  if (report_json(again) != read_file(dir / std::string(artifact::report))) fail(o, "report not derivable from records");
  const auto j = nlohmann::json::parse(read_file(dir / std::string(artifact::report)), nullptr, false);
  for (const char* key : {"total_corrections", "pct_ocr_error", "pct_hallucination", "pct_surface_form",
                          "surface_forms", "pct_content_policy_excluded"}) {
    if (j.is_discarded() || !j.contains(key)) fail(o, std::string("report.json lacks ") + key);
  }

  // Arithmetic example: 6 hallucinations, 2 OCR errors, 2 surface forms.
  std::vector<ProcessedRecord> rs(1);
  rs[0].source.id = "x";
  rs[0].source.text = "uno dos tres cuatro cinco seis";
  rs[0].status = RecordStatus::corrected;
  rs[0].text_final = rs[0].source.text;
  for (int i = 0; i < 10; ++i) {
    ClassifiedCorrection cc;
    cc.original = "o" + std::to_string(i);
    cc.corrected = "c" + std::to_string(i);
    cc.label = i < 6 ? Label::hallucination : i < 8 ? Label::ocr_error : Label::surface_form;
    rs[0].corrections.push_back(cc);
  }
  const RunReport small = build_report(rs, UnicodeWordTokenizer{});
  if (small.pct_hallucination != 60.0 || small.pct_ocr_error != 20.0 || small.pct_surface_form != 20.0) {
    fail(o, "6/2/2 example does not give 60/20/20");
  }
  if (o.pass) {
    o.detail = "structural checks hold; corpus-scale figures need the full corpus and live LLM (not reproduced)";
  }
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"similarity anchors", ratio_anchors},       {"golden example", golden_example},
      {"rule table", rule_table},                  {"cleaning filters", cleaning_filters},
      {"reconstruction property", reconstruction}, {"determinism", determinism},
      {"oracle equivalence", oracle_equivalence},  {"report structure", report_structure},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s (%s) [%.0f ms]\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), ms);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
