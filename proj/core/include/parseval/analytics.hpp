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

// Metrics over an outcome store and its run manifest. Every function is a
// pure function of its inputs.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "parseval/expected.hpp"
#include "parseval/manifest.hpp"
#include "parseval/store.hpp"
#include "parseval/taxonomy.hpp"

namespace parseval::analytics {

using harness::OutcomeRow;
using harness::RunManifest;

// num/den as a percentage, rounded half-up at `decimals` places using exact
// integer arithmetic. Example: (28875, 186576846, 2) -> "0.02%".
std::string format_percent(std::uint64_t num, std::uint64_t den, int decimals);

struct ErrorRate {
  std::string parser_id;
  std::uint64_t errors = 0;  // n_e
  std::uint64_t total = 0;   // N
  double ratio = 0.0;

  std::string percent(int decimals = 2) const { return format_percent(errors, total, decimals); }
};

// Fails when total is zero or errors exceed total.
Expected<ErrorRate, std::string> error_rate(std::uint64_t errors, std::uint64_t total,
                                            std::string parser_id = {});

struct CategoryDistribution {
  std::string parser_id;
  std::array<std::uint64_t, 7> counts{};  // indexed like kAllCategories

  std::uint64_t count(ErrorCategory c) const;
  std::uint64_t total() const;
  // nullopt when the parser has no errors.
  std::optional<double> share(ErrorCategory c) const;
};

CategoryDistribution category_distribution(const std::vector<OutcomeRow>& rows, const std::string& parser_id);

struct Overlap {
  std::string parser_a;
  std::string parser_b;
  std::optional<ErrorCategory> category;  // nullopt: any rejection
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  std::uint64_t intersection = 0;
  std::uint64_t union_size = 0;
  // Undefined (nullopt) when the denominator is zero.
  std::optional<double> match_fraction_a;
  std::optional<double> match_fraction_b;
  std::optional<double> jaccard;
};

Overlap overlap_of_sets(const std::set<std::string>& a, const std::set<std::string>& b);
Overlap overlap(const std::vector<OutcomeRow>& rows, const std::string& parser_a, const std::string& parser_b,
                std::optional<ErrorCategory> category);

// Chooses reference-parser rows for a discrepancy table.
struct Selector {
  enum class Kind { kAny, kCategory, kErrorPrefix, kCheckId };
  Kind kind = Kind::kAny;
  ErrorCategory category = ErrorCategory::kUncategorized;
  std::string text;

  static Selector any() { return {}; }
  static Selector by_category(ErrorCategory c) { return {Kind::kCategory, c, {}}; }
  static Selector by_error_prefix(std::string prefix) { return {Kind::kErrorPrefix, {}, std::move(prefix)}; }
  // Built-in error strings start with "<check_id>: ".
  static Selector by_check_id(std::string id) { return {Kind::kCheckId, {}, std::move(id)}; }
  // "any", "category:<NAME>", "prefix:<text>" or "check:<id>".
  static Expected<Selector, std::string> parse(std::string_view spec);

  bool matches(const OutcomeRow& row) const;
  std::string describe() const;
};

struct DiscrepancyEntry {
  std::string parser_id;
  std::uint64_t count = 0;
};

struct DiscrepancyTable {
  std::string reference;
  std::string selector;
  std::uint64_t selected = 0;  // fingerprints chosen via the reference parser
  std::vector<DiscrepancyEntry> entries;  // manifest parser order
};

Expected<DiscrepancyTable, std::string> discrepancy_table(const std::vector<OutcomeRow>& rows,
                                                          const RunManifest& manifest, const std::string& reference,
                                                          const Selector& selector);

struct DiscrepancyRow {
  std::string fingerprint;
  // Per parser: nullopt = accepted, otherwise the category of its rejection.
  std::map<std::string, std::optional<ErrorCategory>> outcomes;
  bool disagreement = false;
};

// One row per fingerprint rejected by at least one parser.
std::vector<DiscrepancyRow> discrepancy_rows(const std::vector<OutcomeRow>& rows, const RunManifest& manifest);

struct BatchTiming {
  std::string parser_id;
  std::string batch_id;
  std::uint64_t cert_count = 0;
  std::int64_t wall_ns = 0;
  double per_cert_ns = 0.0;
};

struct TimingStats {
  std::string parser_id;
  std::vector<BatchTiming> batches;
  double min_ns = 0.0;
  double median_ns = 0.0;
  double max_ns = 0.0;
  double mean_ns = 0.0;
};

Expected<TimingStats, std::string> timing_stats(const RunManifest& manifest, const std::string& parser_id);

// Cross-checks a store against its manifest: every row names a known parser
// and batch, no row belongs to a failed batch, and N > 0.
std::optional<std::string> check_consistency(const std::vector<OutcomeRow>& rows, const RunManifest& manifest);

struct Report {
  std::string run_id;
  std::string table_version;
  std::uint64_t total = 0;
  std::vector<ErrorRate> rates;  // descending ratio
  std::vector<CategoryDistribution> distributions;
  std::vector<Overlap> overlaps;
  std::optional<DiscrepancyTable> discrepancies;
  std::vector<TimingStats> timings;
};

struct ReportOptions {
  std::string reference;  // empty: first parser in the manifest
  Selector selector;
};

Expected<Report, std::string> build_report(const std::vector<OutcomeRow>& rows, const RunManifest& manifest,
                                           const ReportOptions& options = {});

enum class ReportFormat { kJson, kText, kCsv };
std::optional<ReportFormat> report_format_from_string(std::string_view name);
std::string render(const Report& report, ReportFormat format, int decimals = 2);

}  // namespace parseval::analytics
