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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parseval/expected.hpp"

namespace parseval {

// The seven error categories. Serialized names are frozen; adding a category
// requires bumping the table format version.
enum class ErrorCategory {
  kAsn1ParseError,
  kCryptoUnsupported,
  kCryptoValueError,
  kUncategorized,
  kX509ParseError,
  kX509Unsupported,
  kX509ValueError,
};

inline constexpr std::array<ErrorCategory, 7> kAllCategories = {
    ErrorCategory::kAsn1ParseError,  ErrorCategory::kCryptoUnsupported,
    ErrorCategory::kCryptoValueError, ErrorCategory::kUncategorized,
    ErrorCategory::kX509ParseError,  ErrorCategory::kX509Unsupported,
    ErrorCategory::kX509ValueError,
};

std::string_view to_string(ErrorCategory category);
std::optional<ErrorCategory> category_from_string(std::string_view name);

struct CategorizedError {
  ErrorCategory category = ErrorCategory::kUncategorized;
  std::string message;
  // Set by the built-in parser; absent for errors reported by external parsers.
  std::optional<std::string> check_id;
  std::optional<std::size_t> offset;

  // "<check_id>: <message>" for built-in errors, the bare message otherwise.
  std::string to_error_string() const;
};

// A rule pattern is either an exact string or, with a single trailing '*', a
// literal prefix. Matching is case-sensitive.
class Pattern {
 public:
  static std::optional<Pattern> parse(std::string_view text);

  bool matches(std::string_view s) const;
  // True when every string matched by `other` is also matched by this.
  bool covers(const Pattern& other) const;

  const std::string& literal() const { return literal_; }
  bool is_prefix() const { return prefix_; }
  std::string text() const { return prefix_ ? literal_ + '*' : literal_; }

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::string literal_;
  bool prefix_ = false;
};

struct ClassificationRule {
  std::string parser_id;
  Pattern pattern;
  ErrorCategory category;
};

struct TableLoadError {
  std::size_t line = 0;
  std::string message;
};

class ClassificationTable {
 public:
  static constexpr std::string_view kHeader = "parseval-table 1";

  ClassificationTable() = default;
  explicit ClassificationTable(std::vector<ClassificationRule> rules);

  static Expected<ClassificationTable, TableLoadError> parse(std::string_view text);
  static Expected<ClassificationTable, TableLoadError> load(const std::filesystem::path& path);
  // The table shipped with the library.
  static const ClassificationTable& builtin();

  // First matching rule for the parser wins; no match is UNCATEGORIZED.
  ErrorCategory classify(std::string_view parser_id, std::string_view error_string) const;

  std::string serialize() const;
  // Format version plus a digest of the serialized rules.
  const std::string& version() const { return version_; }
  const std::vector<ClassificationRule>& rules() const { return rules_; }

 private:
  std::vector<ClassificationRule> rules_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_parser_;
  std::string version_;
};

ErrorCategory classify(std::string_view parser_id, std::string_view error_string,
                       const ClassificationTable& table);

struct TableWarning {
  enum class Kind { kUnreachable, kDuplicate };
  Kind kind;
  std::size_t rule_index;    // the rule that can never fire
  std::size_t shadowed_by;   // the earlier rule responsible
  std::string message;
};

std::vector<TableWarning> validate_table(const ClassificationTable& table);

std::string_view default_table_text();

}  // namespace parseval
