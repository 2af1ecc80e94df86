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

#include "parseval/taxonomy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "parseval/codec.hpp"

namespace parseval {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kAsn1ParseError: return "ASN1_PARSE_ERROR";
    case ErrorCategory::kCryptoUnsupported: return "CRYPTO_UNSUPPORTED";
    case ErrorCategory::kCryptoValueError: return "CRYPTO_VALUE_ERROR";
    case ErrorCategory::kUncategorized: return "UNCATEGORIZED";
    case ErrorCategory::kX509ParseError: return "X509_PARSE_ERROR";
    case ErrorCategory::kX509Unsupported: return "X509_UNSUPPORTED";
    case ErrorCategory::kX509ValueError: return "X509_VALUE_ERROR";
  }
  return "UNCATEGORIZED";
}

std::optional<ErrorCategory> category_from_string(std::string_view name) {
  for (ErrorCategory c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string CategorizedError::to_error_string() const {
  if (check_id) return *check_id + ": " + message;
  return message;
}

std::optional<Pattern> Pattern::parse(std::string_view text) {
  Pattern p;
  if (!text.empty() && text.back() == '*') {
    p.prefix_ = true;
    text.remove_suffix(1);
  }
  if (text.find('*') != std::string_view::npos) return std::nullopt;
  if (text.empty() && !p.prefix_) return std::nullopt;
  p.literal_ = std::string(text);
  return p;
}

bool Pattern::matches(std::string_view s) const {
  return prefix_ ? s.substr(0, literal_.size()) == literal_ : s == literal_;
}

bool Pattern::covers(const Pattern& other) const {
  if (!prefix_) return !other.prefix_ && other.literal_ == literal_;
  return std::string_view(other.literal_).substr(0, literal_.size()) == literal_;
}

ClassificationTable::ClassificationTable(std::vector<ClassificationRule> rules)
    : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].category == ErrorCategory::kUncategorized) {
      throw std::invalid_argument("UNCATEGORIZED is the fall-through, not a rule category");
    }
    by_parser_[rules_[i].parser_id].push_back(i);
  }
  version_ = "1/" + sha256_hex(as_bytes_view(serialize())).substr(0, 16);
}

Expected<ClassificationTable, TableLoadError> ClassificationTable::parse(std::string_view text) {
  std::vector<ClassificationRule> rules;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line_no == 1) {
      if (line != kHeader) {
        return unexpected(TableLoadError{1, "expected header '" + std::string(kHeader) + "'"});
      }
      saw_header = true;
      continue;
    }
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      return unexpected(TableLoadError{line_no, "expected 3 tab-separated fields, got " + std::to_string(fields.size())});
    }
    if (fields[0].empty()) return unexpected(TableLoadError{line_no, "empty parser id"});
    auto pattern = Pattern::parse(fields[1]);
    if (!pattern) {
      return unexpected(TableLoadError{line_no, "bad pattern '" + std::string(fields[1]) +
                                                    "' (only a single trailing '*' is allowed)"});
    }
    auto category = category_from_string(fields[2]);
    if (!category) {
      return unexpected(TableLoadError{line_no, "unknown category '" + std::string(fields[2]) + "'"});
    }
    if (*category == ErrorCategory::kUncategorized) {
      return unexpected(TableLoadError{line_no, "UNCATEGORIZED cannot be assigned by a rule"});
    }
    rules.push_back({std::string(fields[0]), std::move(*pattern), *category});
  }
  if (!saw_header) return unexpected(TableLoadError{1, "empty file"});
  return ClassificationTable(std::move(rules));
}

Expected<ClassificationTable, TableLoadError> ClassificationTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected(TableLoadError{0, "cannot open " + path.string()});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ClassificationTable& ClassificationTable::builtin() {
  static const ClassificationTable table = [] {
    auto parsed = parse(default_table_text());
    if (!parsed) {
      throw std::logic_error("shipped classification table is malformed at line " +
                             std::to_string(parsed.error().line) + ": " + parsed.error().message);
    }
    return std::move(parsed).value();
  }();
  return table;
}

ErrorCategory ClassificationTable::classify(std::string_view parser_id, std::string_view error_string) const {
  if (error_string.empty()) return ErrorCategory::kUncategorized;
  const auto it = by_parser_.find(std::string(parser_id));
  if (it == by_parser_.end()) return ErrorCategory::kUncategorized;
  for (std::size_t i : it->second) {
    if (rules_[i].pattern.matches(error_string)) return rules_[i].category;
  }
  return ErrorCategory::kUncategorized;
}

ErrorCategory classify(std::string_view parser_id, std::string_view error_string,
                       const ClassificationTable& table) {
  return table.classify(parser_id, error_string);
}

std::string ClassificationTable::serialize() const {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : rules_) {
    out += r.parser_id;
    out += '\t';
    out += r.pattern.text();
    out += '\t';
    out += to_string(r.category);
    out += '\n';
  }
  return out;
}

std::vector<TableWarning> validate_table(const ClassificationTable& table) {
  std::vector<TableWarning> warnings;
  const auto& rules = table.rules();
  for (std::size_t j = 0; j < rules.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (rules[i].parser_id != rules[j].parser_id) continue;
      if (rules[i].pattern == rules[j].pattern) {
        warnings.push_back({TableWarning::Kind::kDuplicate, j, i,
                            "rule " + std::to_string(j + 1) + " duplicates rule " + std::to_string(i + 1) +
                                " (" + rules[j].parser_id + ", " + rules[j].pattern.text() + ")"});
        break;
      }
      if (rules[i].pattern.covers(rules[j].pattern)) {
        warnings.push_back({TableWarning::Kind::kUnreachable, j, i,
                            "rule " + std::to_string(j + 1) + " (" + rules[j].pattern.text() +
                                ") is unreachable: shadowed by rule " + std::to_string(i + 1) + " (" +
                                rules[i].pattern.text() + ")"});
        break;
      }
    }
  }
  return warnings;
}

}  // namespace parseval
