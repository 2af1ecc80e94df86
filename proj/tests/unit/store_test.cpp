// Copyright 2026 The parseval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "parseval/manifest.hpp"
#include "parseval/store.hpp"

namespace parseval::harness {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("parseval_store_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

OutcomeRow sample(std::string parser, std::uint64_t line) {
  return {"r1", std::move(parser), "ab", "b", line, "der-truncated: short", ErrorCategory::kAsn1ParseError, 7};
}

TEST(Store, JsonLineHasFixedKeyOrder) {
  EXPECT_EQ(to_json_line(sample("p", 3)),
            R"({"run_id":"r1","parser_id":"p","fingerprint":"ab","batch_id":"b","line_no":3,)"
            R"("error_string":"der-truncated: short","category":"ASN1_PARSE_ERROR","duration_ns":7})");
}

TEST(Store, RowJsonRoundTrip) {
  auto r = sample("p", 3);
  r.error_string = "quote \" tab\t unicode \xc3\xa9";
  auto back = row_from_json(to_json_line(r));
  ASSERT_TRUE(back) << back.error();
  EXPECT_EQ(*back, r);
}

TEST(Store, RowJsonValidation) {
  EXPECT_FALSE(row_from_json("{}"));
  EXPECT_FALSE(row_from_json("not json"));
  auto line = to_json_line(sample("p", 3));
  auto bad_cat = line;
  bad_cat.replace(bad_cat.find("ASN1_PARSE_ERROR"), 16, "NOT_A_CATEGORY!!");
  EXPECT_FALSE(row_from_json(bad_cat));
  auto extra = line;
  extra.insert(extra.size() - 1, R"(,"extra":1)");
  EXPECT_FALSE(row_from_json(extra));
}

TEST(Store, InvalidUtf8IsReplaced) {
  auto r = sample("p", 1);
  r.error_string = "bad \xff byte";
  auto back = row_from_json(to_json_line(r));
  ASSERT_TRUE(back);
  EXPECT_EQ(back->error_string, "bad \xef\xbf\xbd byte");
}

TEST_F(TempDir, WriteReadCompact) {
  const auto path = dir_ / "store.jsonl";
  {
    auto w = StoreWriter::open(path, true);
    ASSERT_TRUE(w) << w.error();
    EXPECT_FALSE(w->append({sample("z", 2), sample("a", 9)}));
    EXPECT_FALSE(w->append({sample("a", 1), sample("z", 2)}));
    EXPECT_FALSE(w->flush());
  }
  auto rows = read_store(path);
  ASSERT_TRUE(rows);
  EXPECT_EQ(rows->size(), 4u);

  auto kept = compact_store(path);
  ASSERT_TRUE(kept) << kept.error();
  EXPECT_EQ(*kept, 3u);
  rows = read_store(path);
  ASSERT_TRUE(rows);
  ASSERT_EQ(rows->size(), 3u);
  EXPECT_EQ((*rows)[0], sample("a", 1));
  EXPECT_EQ((*rows)[1], sample("a", 9));
  EXPECT_EQ((*rows)[2], sample("z", 2));
  EXPECT_FALSE(fs::exists(dir_ / "store.jsonl.tmp"));
}

TEST_F(TempDir, ReadReportsBadLine) {
  const auto path = dir_ / "store.jsonl";
  std::ofstream(path) << to_json_line(sample("p", 1)) << "\n{broken\n";
  auto rows = read_store(path);
  ASSERT_FALSE(rows);
  EXPECT_NE(rows.error().find(":2"), std::string::npos) << rows.error();
}

TEST_F(TempDir, ManifestRoundTrip) {
  RunManifest m;
  m.run_id = "0123456789abcdef";
  m.timestamp = "2026-01-01T00:00:00Z";
  m.table_version = "1/abc";
  m.parsers = {{"builtin:strict", "0.1.0", "builtin", "strict"}, {"go", "1.21", "external", "./adapter"}};
  m.batches = {{"b1", "b1.txt", 10, 1, {{"go", 500}}, {"go"}}, {"b2", "b2.txt", 5, 0, {}, {}}};
  m.ingest_errors = {{"b1", 4, "bad base64"}};
  m.failures = {{"go", "b1", 2, "adapter crashed"}};
  m.duplicates = {{"ff", {{"b1", 1}, {"b2", 3}}}};
  EXPECT_EQ(m.total_certificates(), 15u);
  EXPECT_EQ(m.certificates_for("go"), 5u);
  EXPECT_EQ(m.certificates_for("builtin:strict"), 15u);

  const auto path = dir_ / "m.json";
  ASSERT_FALSE(m.save(path));
  auto back = RunManifest::load(path);
  ASSERT_TRUE(back) << back.error();
  EXPECT_EQ(back->run_id, m.run_id);
  EXPECT_EQ(back->parsers.size(), 2u);
  EXPECT_EQ(back->batches[0].failed_parsers, m.batches[0].failed_parsers);
  EXPECT_EQ(back->batches[0].durations_ns, m.batches[0].durations_ns);
  EXPECT_EQ(back->duplicates[0].occurrences[1].line_no, 3u);
  EXPECT_EQ(back->failures[0].attempts, 2);
  EXPECT_EQ(back->to_json(), m.to_json());
}

TEST_F(TempDir, ManifestRejectsInconsistentTotal) {
  RunManifest m;
  m.run_id = "x";
  m.batches = {{"b1", "b1.txt", 10, 0, {}, {}}};
  auto text = m.to_json();
  const auto at = text.find("\"total_certificates\": 10");
  ASSERT_NE(at, std::string::npos) << text;
  text.replace(at, 24, "\"total_certificates\": 11");
  const auto path = dir_ / "m.json";
  std::ofstream(path) << text;
  EXPECT_FALSE(RunManifest::load(path));
}

}  // namespace
}  // namespace parseval::harness
