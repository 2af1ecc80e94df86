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

#include "parseval/store.hpp"

#include <algorithm>
#include <tuple>

#include "json.hpp"

namespace parseval::harness {

namespace {

auto key(const OutcomeRow& r) {
  return std::tie(r.parser_id, r.batch_id, r.line_no, r.fingerprint, r.run_id, r.error_string, r.category,
                  r.duration_ns);
}

}  // namespace

bool row_less(const OutcomeRow& a, const OutcomeRow& b) { return key(a) < key(b); }

std::string to_json_line(const OutcomeRow& row) {
  nlohmann::ordered_json j;
  j["run_id"] = row.run_id;
  j["parser_id"] = row.parser_id;
  j["fingerprint"] = row.fingerprint;
  j["batch_id"] = row.batch_id;
  j["line_no"] = row.line_no;
  j["error_string"] = row.error_string;
  j["category"] = std::string(to_string(row.category));
  j["duration_ns"] = row.duration_ns;
  // Invalid UTF-8 from adapters is replaced rather than rejected.
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Expected<OutcomeRow, std::string> row_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return unexpected(std::string("not a JSON object"));
  static constexpr std::string_view kFields[] = {"run_id",       "parser_id", "fingerprint", "batch_id",
                                                 "line_no",      "error_string", "category", "duration_ns"};
  if (j.size() != std::size(kFields)) return unexpected(std::string("unexpected field count"));
  for (auto f : kFields) {
    if (!j.contains(f)) return unexpected("missing field " + std::string(f));
  }
  try {
    OutcomeRow row;
    row.run_id = j.at("run_id").get<std::string>();
    row.parser_id = j.at("parser_id").get<std::string>();
    row.fingerprint = j.at("fingerprint").get<std::string>();
    row.batch_id = j.at("batch_id").get<std::string>();
    row.line_no = j.at("line_no").get<std::uint64_t>();
    row.error_string = j.at("error_string").get<std::string>();
    const auto category = category_from_string(j.at("category").get<std::string>());
    if (!category) return unexpected("unknown category " + j.at("category").get<std::string>());
    row.category = *category;
    row.duration_ns = j.at("duration_ns").get<std::int64_t>();
    return row;
  } catch (const nlohmann::json::exception& e) {
    return unexpected(std::string(e.what()));
  }
}

Expected<StoreWriter, std::string> StoreWriter::open(const std::filesystem::path& path, bool truncate) {
  std::ofstream out(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
  if (!out) return unexpected("cannot open store " + path.string());
  return StoreWriter(std::move(out));
}

std::optional<std::string> StoreWriter::append(const std::vector<OutcomeRow>& rows) {
  std::string chunk;
  for (const auto& r : rows) {
    chunk += to_json_line(r);
    chunk += '\n';
  }
  out_.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out_) return "store write failed";
  return std::nullopt;
}

std::optional<std::string> StoreWriter::flush() {
  out_.flush();
  if (!out_) return "store flush failed";
  return std::nullopt;
}

Expected<std::vector<OutcomeRow>, std::string> read_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected("cannot open store " + path.string());
  std::vector<OutcomeRow> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto row = row_from_json(line);
    if (!row) return unexpected(path.string() + ":" + std::to_string(n) + ": " + row.error());
    rows.push_back(std::move(*row));
  }
  return rows;
}

Expected<std::size_t, std::string> compact_store(const std::filesystem::path& path) {
  auto rows = read_store(path);
  if (!rows) return unexpected(rows.error());
  std::sort(rows->begin(), rows->end(), row_less);
  rows->erase(std::unique(rows->begin(), rows->end()), rows->end());

  auto tmp = path;
  tmp += ".tmp";
  {
    auto writer = StoreWriter::open(tmp, true);
    if (!writer) return unexpected(writer.error());
    if (auto e = writer->append(*rows)) return unexpected(*e);
    if (auto e = writer->flush()) return unexpected(*e);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) return unexpected("cannot replace store: " + ec.message());
  return rows->size();
}

}  // namespace parseval::harness
