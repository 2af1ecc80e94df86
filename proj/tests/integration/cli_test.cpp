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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "parseval/certgen.hpp"
#include "parseval/cli.hpp"
#include "parseval/codec.hpp"

namespace parseval::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args, const std::string& input = {}) {
  args.insert(args.begin(), "parseval");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("parseval_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST(CliBasics, UsageErrors) {
  EXPECT_EQ(cli({}).code, kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(cli({"parse", "--profile", "paranoid"}).code, kUsage);
  EXPECT_EQ(cli({"gen", "--count", "0"}).code, kUsage);
  EXPECT_EQ(cli({"gen", "--defect", "nope"}).code, kUsage);
  EXPECT_EQ(cli({"gen", "--defect", "none", "--preset", "version-160"}).code, kUsage);
  EXPECT_EQ(cli({"run", "--store", "/tmp/x"}).code, kUsage);
  EXPECT_EQ(cli({"report", "--store", "/nonexistent", "--manifest", "/nonexistent"}).code, kUsage);
  auto help = cli({"--help"});
  EXPECT_EQ(help.code, kOk);
  EXPECT_NE(help.out.find("classify"), std::string::npos);
  auto version = cli({"--version"});
  EXPECT_EQ(version.code, kOk);
  EXPECT_NE(version.out.find("."), std::string::npos);
}

TEST(CliBasics, ParseAcceptsDerPemAndBase64) {
  const auto der = certgen::generate({certgen::Defect::kNone, 1, 1}).front().der;
  const std::string b64 = base64_encode(der);
  std::string pem = "-----BEGIN CERTIFICATE-----\n";
  for (std::size_t i = 0; i < b64.size(); i += 64) pem += b64.substr(i, 64) + "\n";
  pem += "-----END CERTIFICATE-----\n";
  for (const auto& input : {std::string(der.begin(), der.end()), b64 + "\n", pem}) {
    auto r = cli({"parse"}, input);
    EXPECT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.out.rfind("ACCEPT\n", 0), 0u);
    EXPECT_NE(r.out.find(sha256_hex(der)), std::string::npos);
  }
  EXPECT_EQ(cli({"parse"}, "").code, kUsage);
  EXPECT_EQ(cli({"parse"}, "%%%").code, kUsage);
  EXPECT_EQ(cli({"parse", "/nonexistent.der"}).code, kUsage);
}

TEST(CliBasics, ParseReportsRejections) {
  const auto der = certgen::generate({certgen::Defect::kRsaBadExponent, 1, 1}).front().der;
  const std::string input(der.begin(), der.end());
  auto strict = cli({"parse", "--profile", "strict", "-"}, input);
  EXPECT_EQ(strict.code, kFailure);
  EXPECT_NE(strict.out.find("category: CRYPTO_VALUE_ERROR"), std::string::npos);
  EXPECT_NE(strict.out.find("check: rsa-exponent"), std::string::npos);
  EXPECT_EQ(cli({"parse", "-p", "lenient"}, input).code, kOk);
}

TEST(CliBasics, Classify) {
  auto r = cli({"classify", "--parser-id", "go", "x509: malformed UTCTime", "something new"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "ASN1_PARSE_ERROR\tx509: malformed UTCTime\nUNCATEGORIZED\tsomething new\n");
  auto piped = cli({"classify", "--parser-id", "wolfssl"}, "ok\r\nASN parsing error\n");
  EXPECT_EQ(piped.out, "UNCATEGORIZED\tok\nASN1_PARSE_ERROR\tASN parsing error\n");
  EXPECT_EQ(cli({"classify", "x"}).code, kUsage);
  auto validate = cli({"classify", "--validate"});
  EXPECT_EQ(validate.code, kOk);
  EXPECT_NE(validate.out.find("0 warnings"), std::string::npos);
  EXPECT_EQ(cli({"classify", "--dump"}).out.rfind("parseval-table 1\n", 0), 0u);
}

TEST_F(Cli, ClassifyTableSources) {
  std::ofstream(path("t.tsv")) << "parseval-table 1\ngo\tx509:*\tX509_PARSE_ERROR\ngo\tx509: m*\tASN1_PARSE_ERROR\n";
  std::ofstream(path("bad.tsv")) << "parseval-table 1\ngo\tx\n";
  auto r = cli({"classify", "--table", path("t.tsv"), "--parser-id", "go", "x509: malformed"});
  EXPECT_EQ(r.out, "X509_PARSE_ERROR\tx509: malformed\n");
  EXPECT_EQ(cli({"classify", "--table", path("t.tsv"), "--validate"}).code, kFailure);
  auto bad = cli({"classify", "--table", path("bad.tsv"), "--parser-id", "go", "x"});
  EXPECT_EQ(bad.code, kUsage);
  EXPECT_NE(bad.err.find(":2:"), std::string::npos) << bad.err;

  ::setenv(kTableEnv, path("t.tsv").c_str(), 1);
  auto env = cli({"classify", "--parser-id", "go", "x509: malformed"});
  ::unsetenv(kTableEnv);
  EXPECT_EQ(env.out, "X509_PARSE_ERROR\tx509: malformed\n");
}

TEST_F(Cli, GenWritesBatchAndSidecar) {
  auto r = cli({"gen", "--preset", "ec-point-17", "--seed", "4", "--out", path("b.txt"), "--sidecar", path("s.jsonl")});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream batch(path("b.txt"));
  std::ifstream sidecar(path("s.jsonl"));
  std::string line, side;
  std::size_t n = 0;
  const auto expected = certgen::generate({certgen::Defect::kEcBadPoint, 17, 4});
  while (std::getline(batch, line)) {
    ASSERT_TRUE(std::getline(sidecar, side));
    const auto j = nlohmann::json::parse(side);
    EXPECT_EQ(j["fingerprint"], sha256_hex(*base64_decode(line)));
    EXPECT_EQ(j["fingerprint"], expected[n].fingerprint);
    EXPECT_EQ(j["defect_id"], "ec-bad-point");
    ++n;
  }
  EXPECT_EQ(n, 17u);

  auto out = cli({"gen", "-d", "truncated", "-n", "3"});
  EXPECT_EQ(std::count(out.out.begin(), out.out.end(), '\n'), 3);
}

TEST_F(Cli, RunThenReport) {
  ASSERT_EQ(cli({"gen", "--preset", "version-160", "--out", path("v.txt")}).code, kOk);
  ASSERT_EQ(cli({"gen", "-d", "none", "-n", "40", "--out", path("n.txt")}).code, kOk);
  auto run = cli({"run", "-b", path("v.txt"), "-b", path("n.txt"), "-P", "builtin:strict", "-P", "builtin:lenient",
                  "--store", path("store.jsonl"), "-j", "2"});
  ASSERT_EQ(run.code, kOk) << run.err;
  EXPECT_NE(run.out.find("certificates: 200"), std::string::npos) << run.out;
  ASSERT_TRUE(fs::exists(path("store.jsonl.manifest.json")));

  auto json = cli({"report", "--store", path("store.jsonl"), "--manifest", path("store.jsonl.manifest.json"),
                   "--format", "json", "--select", "check:version"});
  ASSERT_EQ(json.code, kOk) << json.err;
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["discrepancies"]["selected"], 160);
  EXPECT_EQ(j["discrepancies"]["counts"][1]["count"], 0);

  auto csv = cli({"report", "--store", path("store.jsonl"), "--manifest", path("store.jsonl.manifest.json"), "-f",
                  "csv", "--decimals", "1"});
  EXPECT_EQ(csv.code, kOk);
  EXPECT_NE(csv.out.find("80.0%"), std::string::npos) << csv.out;

  EXPECT_EQ(cli({"report", "--store", path("store.jsonl"), "--manifest", path("store.jsonl.manifest.json"),
                 "--reference", "nobody"})
                .code,
            kFailure);
  EXPECT_EQ(cli({"report", "--store", path("store.jsonl"), "--manifest", path("store.jsonl.manifest.json"),
                 "--select", "bogus"})
                .code,
            kUsage);
}

TEST_F(Cli, RunWithCorpusDirectory) {
  fs::create_directories(dir_ / "corpus");
  ASSERT_EQ(cli({"gen", "-n", "5", "--out", path("corpus/a.txt")}).code, kOk);
  ASSERT_EQ(cli({"gen", "-n", "5", "-s", "2", "--out", path("corpus/b.txt")}).code, kOk);
  auto run = cli({"run", "--corpus", path("corpus"), "-P", "builtin:lenient", "--store", path("s.jsonl"),
                  "--manifest", path("m.json")});
  ASSERT_EQ(run.code, kOk) << run.err;
  EXPECT_NE(run.out.find("certificates: 10"), std::string::npos);
  EXPECT_EQ(cli({"run", "--corpus", path("corpus"), "-P", "builtin:bogus", "--store", path("s.jsonl")}).code, kUsage);
}

}  // namespace
}  // namespace parseval::cli
