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

#include "parseval/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace parseval::harness {

using json = nlohmann::ordered_json;

std::uint64_t RunManifest::total_certificates() const {
  std::uint64_t n = 0;
  for (const auto& b : batches) n += b.cert_count;
  return n;
}

std::uint64_t RunManifest::certificates_for(const std::string& parser_id) const {
  std::uint64_t n = 0;
  for (const auto& b : batches) {
    if (!b.failed_parsers.contains(parser_id)) n += b.cert_count;
  }
  return n;
}

bool RunManifest::has_parser(const std::string& parser_id) const {
  for (const auto& p : parsers) {
    if (p.parser_id == parser_id) return true;
  }
  return false;
}

const BatchEntry* RunManifest::find_batch(const std::string& batch_id) const {
  for (const auto& b : batches) {
    if (b.batch_id == batch_id) return &b;
  }
  return nullptr;
}

std::string RunManifest::to_json() const {
  json j;
  j["run_id"] = run_id;
  j["timestamp"] = timestamp;
  j["table_version"] = table_version;
  j["parsers"] = json::array();
  for (const auto& p : parsers) {
    j["parsers"].push_back({{"parser_id", p.parser_id}, {"version", p.version}, {"kind", p.kind},
                            {"command", p.command}});
  }
  j["batches"] = json::array();
  for (const auto& b : batches) {
    json durations = json::object();
    for (const auto& [pid, ns] : b.durations_ns) durations[pid] = ns;
    j["batches"].push_back({{"batch_id", b.batch_id},
                            {"path", b.path},
                            {"cert_count", b.cert_count},
                            {"ingest_errors", b.ingest_errors},
                            {"durations_ns", durations},
                            {"failed_parsers", b.failed_parsers}});
  }
  j["total_certificates"] = total_certificates();
  j["ingest_errors"] = json::array();
  for (const auto& e : ingest_errors) {
    j["ingest_errors"].push_back({{"batch_id", e.batch_id}, {"line_no", e.line_no}, {"message", e.message}});
  }
  j["failures"] = json::array();
  for (const auto& f : failures) {
    j["failures"].push_back(
        {{"parser_id", f.parser_id}, {"batch_id", f.batch_id}, {"attempts", f.attempts}, {"message", f.message}});
  }
  j["duplicates"] = json::array();
  for (const auto& d : duplicates) {
    json occ = json::array();
    for (const auto& o : d.occurrences) occ.push_back({{"batch_id", o.batch_id}, {"line_no", o.line_no}});
    j["duplicates"].push_back({{"fingerprint", d.fingerprint}, {"occurrences", occ}});
  }
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

Expected<RunManifest, std::string> RunManifest::from_json(const std::string& text) {
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return unexpected(std::string("manifest is not a JSON object"));
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.table_version = j.at("table_version").get<std::string>();
    for (const auto& p : j.at("parsers")) {
      m.parsers.push_back({p.at("parser_id").get<std::string>(), p.at("version").get<std::string>(),
                           p.at("kind").get<std::string>(), p.at("command").get<std::string>()});
    }
    for (const auto& b : j.at("batches")) {
      BatchEntry e;
      e.batch_id = b.at("batch_id").get<std::string>();
      e.path = b.at("path").get<std::string>();
      e.cert_count = b.at("cert_count").get<std::uint64_t>();
      e.ingest_errors = b.at("ingest_errors").get<std::uint64_t>();
      for (const auto& [pid, ns] : b.at("durations_ns").items()) e.durations_ns[pid] = ns.get<std::int64_t>();
      for (const auto& pid : b.at("failed_parsers")) e.failed_parsers.insert(pid.get<std::string>());
      m.batches.push_back(std::move(e));
    }
    for (const auto& e : j.at("ingest_errors")) {
      m.ingest_errors.push_back({e.at("batch_id").get<std::string>(), e.at("line_no").get<std::uint64_t>(),
                                 e.at("message").get<std::string>()});
    }
    for (const auto& f : j.at("failures")) {
      m.failures.push_back({f.at("parser_id").get<std::string>(), f.at("batch_id").get<std::string>(),
                            f.at("attempts").get<int>(), f.at("message").get<std::string>()});
    }
    for (const auto& d : j.at("duplicates")) {
      DuplicateEntry e{d.at("fingerprint").get<std::string>(), {}};
      for (const auto& o : d.at("occurrences")) {
        e.occurrences.push_back({o.at("batch_id").get<std::string>(), o.at("line_no").get<std::uint64_t>()});
      }
      m.duplicates.push_back(std::move(e));
    }
    if (j.contains("total_certificates") && j.at("total_certificates").get<std::uint64_t>() != m.total_certificates()) {
      return unexpected(std::string("total_certificates does not equal the sum of batch counts"));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    return unexpected("malformed manifest: " + std::string(e.what()));
  }
}

std::optional<std::string> RunManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return "cannot write manifest " + path.string();
  out << to_json();
  if (!out) return "cannot write manifest " + path.string();
  return std::nullopt;
}

Expected<RunManifest, std::string> RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace parseval::harness
