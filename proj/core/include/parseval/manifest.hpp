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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parseval/expected.hpp"

namespace parseval::harness {

struct ParserEntry {
  std::string parser_id;
  std::string version;
  std::string kind;     // "builtin" or "external"
  std::string command;  // profile name for builtins
};

struct BatchEntry {
  std::string batch_id;
  std::string path;
  std::uint64_t cert_count = 0;
  std::uint64_t ingest_errors = 0;
  // Wall-clock time of the last attempt, per parser.
  std::map<std::string, std::int64_t> durations_ns;
  // Parsers whose every attempt on this batch failed.
  std::set<std::string> failed_parsers;
};

struct IngestErrorEntry {
  std::string batch_id;
  std::uint64_t line_no = 0;
  std::string message;
};

struct FailureEntry {
  std::string parser_id;
  std::string batch_id;
  int attempts = 0;
  std::string message;
};

struct Occurrence {
  std::string batch_id;
  std::uint64_t line_no = 0;
};

struct DuplicateEntry {
  std::string fingerprint;
  std::vector<Occurrence> occurrences;
};

struct RunManifest {
  std::string run_id;
  std::string timestamp;  // UTC, ISO 8601
  std::string table_version;
  std::vector<ParserEntry> parsers;
  std::vector<BatchEntry> batches;
  std::vector<IngestErrorEntry> ingest_errors;
  std::vector<FailureEntry> failures;
  std::vector<DuplicateEntry> duplicates;

  // Sum of per-batch certificate counts.
  std::uint64_t total_certificates() const;
  // Certificates the parser actually evaluated: failed batches are excluded.
  std::uint64_t certificates_for(const std::string& parser_id) const;
  bool has_parser(const std::string& parser_id) const;
  const BatchEntry* find_batch(const std::string& batch_id) const;

  std::string to_json() const;
  static Expected<RunManifest, std::string> from_json(const std::string& text);

  std::optional<std::string> save(const std::filesystem::path& path) const;
  static Expected<RunManifest, std::string> load(const std::filesystem::path& path);
};

}  // namespace parseval::harness
