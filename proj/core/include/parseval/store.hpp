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

// JSON-lines outcome store. Only failed parses are stored; a certificate
// without a row for a parser was accepted by it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parseval/expected.hpp"
#include "parseval/taxonomy.hpp"

namespace parseval::harness {

struct OutcomeRow {
  std::string run_id;
  std::string parser_id;
  std::string fingerprint;
  std::string batch_id;
  std::uint64_t line_no = 0;
  std::string error_string;
  ErrorCategory category = ErrorCategory::kUncategorized;
  std::int64_t duration_ns = 0;

  friend bool operator==(const OutcomeRow&, const OutcomeRow&) = default;
};

// Compaction order: parser, batch, line, then the remaining fields.
bool row_less(const OutcomeRow& a, const OutcomeRow& b);

// Keys appear in a fixed order, so equal rows serialize to equal bytes.
std::string to_json_line(const OutcomeRow& row);
Expected<OutcomeRow, std::string> row_from_json(std::string_view line);

// Appends whole batches of rows; a batch is written with one call so rows are
// never interleaved. Not thread-safe by itself: the harness owns one writer.
class StoreWriter {
 public:
  static Expected<StoreWriter, std::string> open(const std::filesystem::path& path, bool truncate);

  std::optional<std::string> append(const std::vector<OutcomeRow>& rows);
  std::optional<std::string> flush();

 private:
  explicit StoreWriter(std::ofstream out) : out_(std::move(out)) {}
  std::ofstream out_;
};

Expected<std::vector<OutcomeRow>, std::string> read_store(const std::filesystem::path& path);

// Sorts and deduplicates the store in place (temporary file plus rename).
// Returns the number of rows kept.
Expected<std::size_t, std::string> compact_store(const std::filesystem::path& path);

}  // namespace parseval::harness
