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

// Runs parsers over batch files and records failures.
//
// Adapter wire protocol, version 1:
//   adapter -> harness   PARSEVAL-ADAPTER 1 <parser_id> <version>
//   harness -> adapter   one base64 DER certificate per line, then EOF
//   adapter -> harness   per input line: OK\t<ns> or ERR\t<ns>\t<error string>
//   adapter exits 0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parseval/asn1.hpp"
#include "parseval/expected.hpp"
#include "parseval/manifest.hpp"
#include "parseval/profile.hpp"
#include "parseval/store.hpp"
#include "parseval/taxonomy.hpp"

namespace parseval::harness {

inline constexpr std::string_view kHandshakePrefix = "PARSEVAL-ADAPTER 1 ";

struct CertRecord {
  asn1::Bytes der;
  std::string base64;  // the line as read, trimmed
  std::string fingerprint;
  std::string batch_id;
  std::uint64_t line_no = 0;  // 1-based line in the batch file
};

struct IngestError {
  std::uint64_t line_no = 0;
  std::string message;
};

struct Batch {
  std::string batch_id;
  std::filesystem::path path;
  std::vector<CertRecord> records;
  std::vector<IngestError> errors;
};

// Batch id is the file name without its extension.
std::string batch_id_for(const std::filesystem::path& path);

Expected<Batch, std::string> ingest(const std::filesystem::path& path);
// Same as ingest() for in-memory content.
Batch ingest_text(std::string batch_id, std::string_view text);

struct ParserRef {
  enum class Kind { kBuiltin, kExternal };

  std::string parser_id;
  std::string version;
  Kind kind = Kind::kBuiltin;
  x509::ValidationProfile profile;  // builtin only
  std::string command;              // external only

  // "builtin:strict", "builtin:lenient" or "exec:<shell command>". External
  // parser ids and versions are filled in from the adapter handshake.
  static Expected<ParserRef, std::string> parse(std::string_view spec);
  static ParserRef builtin(const x509::ValidationProfile& profile);
};

struct ParseOutcome {
  std::string parser_id;
  std::string fingerprint;
  std::string batch_id;
  std::uint64_t line_no = 0;
  bool ok = true;
  std::string error_string;
  std::optional<ErrorCategory> category;
  std::int64_t duration_ns = 0;
};

struct Handshake {
  std::string parser_id;
  std::string version;
};

Expected<Handshake, std::string> parse_handshake(std::string_view line);

// Replaces tabs, CR and LF with spaces.
std::string sanitize_error_string(std::string_view s);

struct AdapterResponse {
  bool ok = true;
  std::int64_t duration_ns = 0;
  std::string error_string;
};

struct AdapterRun {
  Handshake handshake;
  std::vector<AdapterResponse> responses;  // aligned with the input lines
};

// Runs one adapter process over the given base64 lines. Errors are protocol
// violations, crashes, non-zero exits and timeouts.
Expected<AdapterRun, std::string> drive_adapter(const std::string& command, const std::vector<std::string>& lines,
                                                std::chrono::milliseconds timeout);

// Evaluates one batch with one parser; rows are classified with `table`.
Expected<std::vector<ParseOutcome>, std::string> evaluate_batch(const ParserRef& parser, const Batch& batch,
                                                                const ClassificationTable& table,
                                                                std::chrono::milliseconds timeout,
                                                                bool per_cert_timing);

struct RunOptions {
  std::size_t workers = 0;  // 0: hardware concurrency
  std::filesystem::path store_path;
  std::filesystem::path manifest_path;  // empty: not written
  // Empty: derived from the inputs, so identical runs share an id.
  std::string run_id;
  bool per_cert_timing = false;
  std::chrono::milliseconds adapter_timeout{60000};
  int max_attempts = 2;
  const ClassificationTable* table = nullptr;  // nullptr: built-in default table
};

struct RunResult {
  RunManifest manifest;
  std::size_t rows_written = 0;
};

Expected<RunResult, std::string> run(const std::vector<std::filesystem::path>& corpus,
                                     const std::vector<ParserRef>& parsers, const RunOptions& options);

}  // namespace parseval::harness
