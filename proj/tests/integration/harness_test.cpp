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
#include <map>
#include <set>

#include <unistd.h>

#include "parseval/certgen.hpp"
#include "parseval/codec.hpp"
#include "parseval/harness.hpp"

namespace parseval::harness {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono_literals;

const std::string kFake = PARSEVAL_FAKE_ADAPTER;

class Harness : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("parseval_harness_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_batch(const std::string& name, certgen::Defect d, std::size_t n, std::uint64_t seed,
                       const std::string& extra = {}) {
    const auto path = dir_ / (name + ".txt");
    std::ofstream out(path);
    for (const auto& c : certgen::generate({d, n, seed})) out << base64_encode(c.der) << "\n";
    out << extra;
    return path;
  }

  RunOptions options(std::size_t workers = 2) const {
    RunOptions o;
    o.workers = workers;
    o.store_path = dir_ / "store.jsonl";
    o.manifest_path = dir_ / "manifest.json";
    o.adapter_timeout = 5000ms;
    return o;
  }

  ParserRef exec(const std::string& args) { return *ParserRef::parse("exec:" + kFake + " " + args); }

  fs::path dir_;
};

TEST(Ingest, LinesErrorsAndIds) {
  const auto der = certgen::generate({certgen::Defect::kNone, 1, 1}).front().der;
  const auto b64 = base64_encode(der);
  const auto batch = ingest_text("b", b64 + "\r\n\n  " + b64 + "  \n%%%\nZg=\n");
  ASSERT_EQ(batch.records.size(), 2u);
  EXPECT_EQ(batch.records[0].line_no, 1u);
  EXPECT_EQ(batch.records[1].line_no, 3u);
  EXPECT_EQ(batch.records[1].fingerprint, sha256_hex(der));
  ASSERT_EQ(batch.errors.size(), 2u);
  EXPECT_EQ(batch.errors[0].line_no, 4u);
  EXPECT_EQ(batch.errors[1].line_no, 5u);
  EXPECT_EQ(batch_id_for("/x/y/batch-007.txt"), "batch-007");
}

TEST(Protocol, Handshake) {
  auto h = parse_handshake("PARSEVAL-ADAPTER 1 go 1.21.0");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->parser_id, "go");
  EXPECT_EQ(h->version, "1.21.0");
  EXPECT_FALSE(parse_handshake("PARSEVAL-ADAPTER 2 go 1.21.0"));
  EXPECT_FALSE(parse_handshake("PARSEVAL-ADAPTER 1 go"));
  EXPECT_FALSE(parse_handshake("HELLO"));
  EXPECT_EQ(sanitize_error_string("a\tb\r\nc"), "a b  c");
}

TEST(Protocol, ParserSpecs) {
  auto s = ParserRef::parse("builtin:strict");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->parser_id, "builtin:strict");
  EXPECT_EQ(s->kind, ParserRef::Kind::kBuiltin);
  EXPECT_FALSE(ParserRef::parse("builtin:nope"));
  EXPECT_FALSE(ParserRef::parse("exec:"));
  EXPECT_FALSE(ParserRef::parse("openssl"));
}

TEST(Protocol, DriveAdapterModes) {
  const std::vector<std::string> lines = {"AAAA", "AAAA", "AAAA"};
  auto ok = drive_adapter(kFake + " ok", lines, 5000ms);
  ASSERT_TRUE(ok) << ok.error();
  EXPECT_EQ(ok->handshake.parser_id, "fake-ok");
  EXPECT_EQ(ok->responses.size(), 3u);
  EXPECT_TRUE(ok->responses[0].ok);
  EXPECT_EQ(ok->responses[0].duration_ns, 1000);

  auto mirror = drive_adapter(kFake + " mirror", lines, 5000ms);
  ASSERT_TRUE(mirror);
  EXPECT_FALSE(mirror->responses[2].ok);
  EXPECT_EQ(mirror->responses[2].error_string.rfind("der-", 0), 0u) << mirror->responses[2].error_string;

  for (auto bad : {"short", "garbage", "crash", "bad-handshake", "exit-nonzero"}) {
    EXPECT_FALSE(drive_adapter(kFake + " " + bad, lines, 5000ms)) << bad;
  }
  const auto start = std::chrono::steady_clock::now();
  auto hung = drive_adapter(kFake + " hang", lines, 300ms);
  ASSERT_FALSE(hung);
  EXPECT_NE(hung.error().find("timed out"), std::string::npos) << hung.error();
  EXPECT_LT(std::chrono::steady_clock::now() - start, 10s);
  EXPECT_FALSE(drive_adapter("/nonexistent/adapter", lines, 5000ms));
}

TEST_F(Harness, BuiltinRunMatchesGroundTruth) {
  const auto b1 = write_batch("b1", certgen::Defect::kInvalidVersion, 20, 1);
  const auto b2 = write_batch("b2", certgen::Defect::kNone, 30, 2, "not base64!\n");
  auto r = run({b1, b2}, {*ParserRef::parse("builtin:strict"), *ParserRef::parse("builtin:lenient")}, options());
  ASSERT_TRUE(r) << r.error();
  const auto& m = r->manifest;
  EXPECT_EQ(m.run_id.size(), 16u);
  EXPECT_EQ(m.total_certificates(), 50u);
  ASSERT_EQ(m.ingest_errors.size(), 1u);
  EXPECT_EQ(m.ingest_errors[0].batch_id, "b2");
  EXPECT_EQ(m.ingest_errors[0].line_no, 31u);
  EXPECT_TRUE(m.failures.empty());
  EXPECT_EQ(r->rows_written, 20u);

  auto rows = read_store(options().store_path);
  ASSERT_TRUE(rows);
  ASSERT_EQ(rows->size(), 20u);
  for (const auto& row : *rows) {
    EXPECT_EQ(row.parser_id, "builtin:strict");
    EXPECT_EQ(row.batch_id, "b1");
    EXPECT_EQ(row.category, ErrorCategory::kX509ValueError);
    EXPECT_EQ(row.error_string.rfind("version: ", 0), 0u);
    EXPECT_EQ(row.duration_ns, 0);
    EXPECT_EQ(row.run_id, m.run_id);
  }
  auto loaded = RunManifest::load(options().manifest_path);
  ASSERT_TRUE(loaded);
  EXPECT_EQ(loaded->to_json(), m.to_json());
}

TEST_F(Harness, WorkerCountDoesNotChangeTheStore) {
  std::vector<fs::path> corpus;
  std::size_t i = 0;
  for (auto d : certgen::all_defects()) corpus.push_back(write_batch("d" + std::to_string(i++), d, 6, 3));
  const std::vector<ParserRef> parsers = {*ParserRef::parse("builtin:strict"), *ParserRef::parse("builtin:lenient"),
                                          exec("mirror")};
  auto one = options(1);
  one.store_path = dir_ / "one.jsonl";
  auto eight = options(8);
  eight.store_path = dir_ / "eight.jsonl";
  auto a = run(corpus, parsers, one);
  auto b = run(corpus, parsers, eight);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->manifest.run_id, b->manifest.run_id);
  auto ra = read_store(one.store_path);
  auto rb = read_store(eight.store_path);
  ASSERT_TRUE(ra && rb);
  EXPECT_EQ(*ra, *rb);
  EXPECT_TRUE(std::is_sorted(ra->begin(), ra->end(), row_less));

  // The external mirror of the strict profile rejects exactly what it rejects.
  std::map<std::string, std::set<std::string>> rejected;
  for (const auto& row : *ra) rejected[row.parser_id].insert(row.fingerprint);
  EXPECT_EQ(rejected["fake-mirror"], rejected["builtin:strict"]);
  EXPECT_EQ(a->manifest.parsers[2].kind, "external");
  EXPECT_EQ(a->manifest.parsers[2].version, "0.1");
}

TEST_F(Harness, DuplicatesAreRecorded) {
  const auto b1 = write_batch("b1", certgen::Defect::kNone, 3, 5);
  const auto b2 = write_batch("b2", certgen::Defect::kNone, 2, 5);
  auto r = run({b1, b2}, {*ParserRef::parse("builtin:lenient")}, options());
  ASSERT_TRUE(r);
  ASSERT_EQ(r->manifest.duplicates.size(), 2u);
  EXPECT_EQ(r->manifest.duplicates[0].occurrences.size(), 2u);
  EXPECT_EQ(r->manifest.total_certificates(), 5u);
}

TEST_F(Harness, CrashIsRetriedOnce) {
  const auto b = write_batch("b", certgen::Defect::kTruncated, 5, 1);
  const auto counter = (dir_ / "count").string();
  // Invocation 1 is the identity probe, 2 crashes, 3 is the retry.
  auto r = run({b}, {exec("crash-nth " + counter + " 2")}, options());
  ASSERT_TRUE(r) << r.error();
  EXPECT_TRUE(r->manifest.failures.empty());
  EXPECT_EQ(r->rows_written, 0u);  // the adapter answers OK to everything
  std::ifstream in(counter);
  int n = 0;
  in >> n;
  EXPECT_EQ(n, 3);
}

TEST_F(Harness, PersistentFailuresAreRecordedNotDropped) {
  const auto good = write_batch("good", certgen::Defect::kNone, 4, 1);
  const auto bad = write_batch("bad", certgen::Defect::kNone, 4, 2);
  auto opt = options();
  opt.adapter_timeout = 300ms;
  for (auto mode : {"crash", "short", "garbage", "hang", "exit-nonzero"}) {
    auto r = run({good, bad}, {exec(mode), *ParserRef::parse("builtin:strict")}, opt);
    ASSERT_TRUE(r) << mode << ": " << r.error();
    const auto& m = r->manifest;
    ASSERT_EQ(m.failures.size(), 2u) << mode;
    EXPECT_EQ(m.failures[0].attempts, 2) << mode;
    EXPECT_EQ(m.failures[0].parser_id, std::string("fake-") + mode);
    EXPECT_TRUE(m.batches[0].failed_parsers.contains(std::string("fake-") + mode));
    EXPECT_EQ(m.certificates_for(std::string("fake-") + mode), 0u);
    EXPECT_EQ(m.certificates_for("builtin:strict"), 8u);
  }
}

TEST_F(Harness, BadHandshakeFailsTheRun) {
  const auto b = write_batch("b", certgen::Defect::kNone, 2, 1);
  auto r = run({b}, {exec("bad-handshake")}, options());
  ASSERT_FALSE(r);
  EXPECT_NE(r.error().find("handshake"), std::string::npos) << r.error();
}

TEST_F(Harness, RunRejectsBadInputs) {
  const auto b = write_batch("b", certgen::Defect::kNone, 2, 1);
  const auto empty = dir_ / "empty.txt";
  std::ofstream(empty) << "\n";
  const auto strict = *ParserRef::parse("builtin:strict");
  EXPECT_FALSE(run({}, {strict}, options()));
  EXPECT_FALSE(run({b}, {}, options()));
  EXPECT_FALSE(run({b, empty}, {strict}, options()));
  EXPECT_FALSE(run({b, b}, {strict}, options()));
  EXPECT_FALSE(run({b}, {strict, strict}, options()));
  EXPECT_FALSE(run({dir_ / "missing.txt"}, {strict}, options()));
}

TEST_F(Harness, ExternalErrorsAreClassifiedWithTheTable) {
  std::vector<fs::path> corpus = {write_batch("t", certgen::Defect::kTruncated, 3, 1),
                                  write_batch("c", certgen::Defect::kEcUnknownCurve, 3, 1),
                                  write_batch("u", certgen::Defect::kBadUri, 3, 1),
                                  write_batch("v", certgen::Defect::kInvalidVersion, 3, 1)};
  auto r = run(corpus, {exec("go")}, options());
  ASSERT_TRUE(r) << r.error();
  auto rows = read_store(options().store_path);
  ASSERT_TRUE(rows);
  ASSERT_EQ(rows->size(), 12u);
  std::map<std::string, ErrorCategory> by_batch;
  for (const auto& row : *rows) {
    EXPECT_EQ(row.parser_id, "go");
    by_batch[row.batch_id] = row.category;
  }
  EXPECT_EQ(by_batch["t"], ErrorCategory::kAsn1ParseError);
  EXPECT_EQ(by_batch["c"], ErrorCategory::kCryptoUnsupported);
  EXPECT_EQ(by_batch["u"], ErrorCategory::kX509ParseError);
  // "x509: version: invalid version 3" has no Go rule.
  EXPECT_EQ(by_batch["v"], ErrorCategory::kUncategorized);

  auto table = ClassificationTable::parse("parseval-table 1\ngo\tx509:*\tX509_VALUE_ERROR\n");
  ASSERT_TRUE(table);
  auto opt = options();
  opt.table = &*table;
  ASSERT_TRUE(run(corpus, {exec("go")}, opt));
  rows = read_store(opt.store_path);
  ASSERT_TRUE(rows);
  for (const auto& row : *rows) EXPECT_EQ(row.category, ErrorCategory::kX509ValueError);
}

TEST_F(Harness, PerCertTimingIsOptIn) {
  const auto b = write_batch("b", certgen::Defect::kTruncated, 4, 1);
  auto opt = options();
  opt.per_cert_timing = true;
  ASSERT_TRUE(run({b}, {*ParserRef::parse("builtin:lenient"), exec("mirror")}, opt));
  auto rows = read_store(opt.store_path);
  ASSERT_TRUE(rows);
  ASSERT_EQ(rows->size(), 8u);
  for (const auto& row : *rows) EXPECT_GT(row.duration_ns, 0) << row.parser_id;
}

}  // namespace
}  // namespace parseval::harness
