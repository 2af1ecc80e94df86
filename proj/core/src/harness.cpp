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

#include "parseval/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "parseval/codec.hpp"
#include "parseval/subprocess.hpp"
#include "parseval/version.hpp"
#include "parseval/x509.hpp"

namespace parseval {

std::string_view library_version() { return PARSEVAL_VERSION; }

}  // namespace parseval

namespace parseval::harness {

namespace {

using Clock = std::chrono::steady_clock;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Expected<AdapterResponse, std::string> parse_response(std::string_view line) {
  AdapterResponse r;
  if (line.starts_with("OK\t")) {
    const auto ns = parse_int(line.substr(3));
    if (!ns) return unexpected("bad duration in response: " + std::string(line));
    r.duration_ns = *ns;
    return r;
  }
  if (line.starts_with("ERR\t")) {
    const auto rest = line.substr(4);
    const auto tab = rest.find('\t');
    if (tab == std::string_view::npos) return unexpected("ERR response without error string");
    const auto ns = parse_int(rest.substr(0, tab));
    if (!ns) return unexpected("bad duration in response: " + std::string(line));
    r.ok = false;
    r.duration_ns = *ns;
    r.error_string = sanitize_error_string(rest.substr(tab + 1));
    return r;
  }
  return unexpected("unrecognized response line: " + std::string(line.substr(0, 80)));
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return asn1::format_instant(now);
}

// Identifies a run by what it evaluates, so identical inputs share a run id.
std::string derive_run_id(const std::vector<ParserRef>& parsers, const std::vector<Batch>& batches) {
  std::string material = "parseval-run\n";
  for (const auto& p : parsers) material += p.parser_id + "\t" + p.version + "\t" + p.command + "\n";
  for (const auto& b : batches) {
    material += b.batch_id + "\n";
    for (const auto& r : b.records) material += r.fingerprint + "\n";
  }
  return sha256_hex(as_bytes_view(material)).substr(0, 16);
}

// Single consumer of outcome rows; workers hand over whole batches.
class WriterQueue {
 public:
  void push(std::vector<OutcomeRow> rows) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(rows));
    }
    cv_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_one();
  }

  // Returns false once closed and drained.
  bool pop(std::vector<OutcomeRow>& out) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
    if (queue_.empty()) return false;
    out = std::move(queue_.front());
    queue_.pop_front();
    return true;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::vector<OutcomeRow>> queue_;
  bool closed_ = false;
};

struct TaskResult {
  std::int64_t duration_ns = 0;
  int attempts = 0;
  std::optional<std::string> failure;
};

}  // namespace

std::string batch_id_for(const std::filesystem::path& path) { return path.stem().string(); }

Batch ingest_text(std::string batch_id, std::string_view text) {
  Batch batch;
  batch.batch_id = std::move(batch_id);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const std::uint64_t line_no = i + 1;
    auto der = base64_decode(line);
    if (!der || der->empty()) {
      batch.errors.push_back({line_no, "invalid base64"});
      continue;
    }
    std::string fp = sha256_hex(*der);
    batch.records.push_back({std::move(*der), std::string(line), std::move(fp), batch.batch_id, line_no});
  }
  return batch;
}

Expected<Batch, std::string> ingest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected("cannot open batch file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Batch batch = ingest_text(batch_id_for(path), ss.str());
  batch.path = path;
  return batch;
}

Expected<ParserRef, std::string> ParserRef::parse(std::string_view spec) {
  if (spec.starts_with("builtin:")) {
    auto profile = x509::ValidationProfile::from_name(spec.substr(8));
    if (!profile) return unexpected("unknown builtin profile '" + std::string(spec.substr(8)) + "'");
    return builtin(*profile);
  }
  if (spec.starts_with("exec:") && spec.size() > 5) {
    ParserRef p;
    p.kind = Kind::kExternal;
    p.command = std::string(spec.substr(5));
    return p;
  }
  return unexpected("parser must be builtin:<profile> or exec:<command>, got '" + std::string(spec) + "'");
}

ParserRef ParserRef::builtin(const x509::ValidationProfile& profile) {
  ParserRef p;
  p.parser_id = "builtin:" + profile.name;
  p.version = std::string(library_version());
  p.kind = Kind::kBuiltin;
  p.profile = profile;
  p.command = profile.name;
  return p;
}

std::string sanitize_error_string(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

Expected<Handshake, std::string> parse_handshake(std::string_view line) {
  if (!line.starts_with(kHandshakePrefix)) {
    return unexpected("bad handshake: '" + std::string(line.substr(0, 80)) + "'");
  }
  const auto rest = line.substr(kHandshakePrefix.size());
  const auto sp = rest.find(' ');
  if (sp == std::string_view::npos || sp == 0 || sp + 1 == rest.size() ||
      rest.find(' ', sp + 1) != std::string_view::npos) {
    return unexpected("bad handshake: '" + std::string(line.substr(0, 80)) + "'");
  }
  return Handshake{std::string(rest.substr(0, sp)), std::string(rest.substr(sp + 1))};
}

Expected<AdapterRun, std::string> drive_adapter(const std::string& command, const std::vector<std::string>& lines,
                                                std::chrono::milliseconds timeout) {
  std::string input;
  for (const auto& l : lines) {
    input += l;
    input += '\n';
  }
  auto proc = run_process(command, input, timeout);
  if (!proc) return unexpected(proc.error());
  if (proc->timed_out) return unexpected("adapter timed out after " + std::to_string(timeout.count()) + " ms");
  if (proc->exit_status != 0) return unexpected("adapter exited with status " + std::to_string(proc->exit_status));

  std::string_view out = proc->output;
  if (out.ends_with('\n')) out.remove_suffix(1);
  auto response_lines = split_lines(out);
  if (proc->output.empty() || response_lines.empty()) return unexpected(std::string("adapter sent no handshake"));

  auto handshake = parse_handshake(response_lines.front());
  if (!handshake) return unexpected(handshake.error());
  AdapterRun run{std::move(*handshake), {}};
  const std::size_t got = response_lines.size() - 1;
  if (got != lines.size()) {
    return unexpected("protocol error: " + std::to_string(got) + " responses for " + std::to_string(lines.size()) +
                      " certificates");
  }
  for (std::size_t i = 1; i < response_lines.size(); ++i) {
    auto r = parse_response(response_lines[i]);
    if (!r) return unexpected("protocol error at response " + std::to_string(i) + ": " + r.error());
    run.responses.push_back(std::move(*r));
  }
  return run;
}

Expected<std::vector<ParseOutcome>, std::string> evaluate_batch(const ParserRef& parser, const Batch& batch,
                                                                const ClassificationTable& table,
                                                                std::chrono::milliseconds timeout,
                                                                bool per_cert_timing) {
  std::vector<ParseOutcome> outcomes;
  outcomes.reserve(batch.records.size());

  if (parser.kind == ParserRef::Kind::kBuiltin) {
    for (const auto& rec : batch.records) {
      ParseOutcome o{parser.parser_id, rec.fingerprint, rec.batch_id, rec.line_no, true, {}, {}, 0};
      const auto start = per_cert_timing ? Clock::now() : Clock::time_point{};
      auto result = x509::parse_certificate(rec.der, parser.profile);
      if (per_cert_timing) {
        o.duration_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
      }
      if (!result) {
        o.ok = false;
        o.error_string = sanitize_error_string(result.error().to_error_string());
        o.category = result.error().category;
      }
      outcomes.push_back(std::move(o));
    }
    return outcomes;
  }

  std::vector<std::string> lines;
  lines.reserve(batch.records.size());
  for (const auto& rec : batch.records) lines.push_back(rec.base64);
  auto run = drive_adapter(parser.command, lines, timeout);
  if (!run) return unexpected(run.error());
  if (!parser.parser_id.empty() && run->handshake.parser_id != parser.parser_id) {
    return unexpected("adapter announced parser id '" + run->handshake.parser_id + "', expected '" +
                      parser.parser_id + "'");
  }
  for (std::size_t i = 0; i < batch.records.size(); ++i) {
    const auto& rec = batch.records[i];
    const auto& r = run->responses[i];
    ParseOutcome o{parser.parser_id, rec.fingerprint, rec.batch_id, rec.line_no, r.ok, r.error_string, {}, 0};
    if (per_cert_timing) o.duration_ns = r.duration_ns;
    if (!r.ok) o.category = table.classify(parser.parser_id, r.error_string);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

Expected<RunResult, std::string> run(const std::vector<std::filesystem::path>& corpus,
                                     const std::vector<ParserRef>& parsers_in, const RunOptions& options) {
  if (parsers_in.empty()) return unexpected(std::string("at least one parser is required"));
  if (corpus.empty()) return unexpected(std::string("at least one batch file is required"));
  const ClassificationTable& table = options.table ? *options.table : ClassificationTable::builtin();

  std::vector<Batch> batches;
  std::set<std::string> batch_ids;
  for (const auto& path : corpus) {
    auto batch = ingest(path);
    if (!batch) return unexpected(batch.error());
    if (!batch_ids.insert(batch->batch_id).second) return unexpected("duplicate batch id " + batch->batch_id);
    if (batch->records.empty()) return unexpected("batch " + batch->batch_id + " contains no certificates");
    batches.push_back(std::move(*batch));
  }

  // External parsers identify themselves through the handshake.
  std::vector<ParserRef> parsers = parsers_in;
  std::set<std::string> parser_ids;
  for (auto& p : parsers) {
    if (p.kind == ParserRef::Kind::kExternal && p.parser_id.empty()) {
      auto probe = drive_adapter(p.command, {}, options.adapter_timeout);
      if (!probe) return unexpected("adapter '" + p.command + "': " + probe.error());
      p.parser_id = probe->handshake.parser_id;
      p.version = probe->handshake.version;
    }
    if (!parser_ids.insert(p.parser_id).second) return unexpected("duplicate parser id " + p.parser_id);
  }

  RunManifest manifest;
  manifest.run_id = options.run_id.empty() ? derive_run_id(parsers, batches) : options.run_id;
  manifest.timestamp = utc_timestamp();
  manifest.table_version = table.version();
  for (const auto& p : parsers) {
    manifest.parsers.push_back(
        {p.parser_id, p.version, p.kind == ParserRef::Kind::kBuiltin ? "builtin" : "external", p.command});
  }

  auto writer = StoreWriter::open(options.store_path, true);
  if (!writer) return unexpected(writer.error());

  const std::size_t task_count = parsers.size() * batches.size();
  std::size_t workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, task_count);

  std::vector<TaskResult> results(task_count);
  std::atomic<std::size_t> next{0};
  WriterQueue queue;
  std::optional<std::string> write_error;
  std::size_t rows_written = 0;
  const int max_attempts = std::max(1, options.max_attempts);

  {
    std::jthread writer_thread([&] {
      std::vector<OutcomeRow> rows;
      while (queue.pop(rows)) {
        if (write_error) continue;
        if (auto e = writer->append(rows)) write_error = e;
        rows_written += rows.size();
      }
      if (!write_error) write_error = writer->flush();
    });

    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t t = next++; t < task_count; t = next++) {
            const ParserRef& parser = parsers[t / batches.size()];
            const Batch& batch = batches[t % batches.size()];
            TaskResult& result = results[t];
            for (int attempt = 1; attempt <= max_attempts; ++attempt) {
              result.attempts = attempt;
              const auto start = Clock::now();
              auto outcomes = evaluate_batch(parser, batch, table, options.adapter_timeout, options.per_cert_timing);
              result.duration_ns =
                  std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
              if (!outcomes) {
                result.failure = outcomes.error();
                continue;
              }
              result.failure.reset();
              std::vector<OutcomeRow> rows;
              for (auto& o : *outcomes) {
                if (o.ok) continue;
                rows.push_back({manifest.run_id, o.parser_id, o.fingerprint, o.batch_id, o.line_no,
                                std::move(o.error_string), *o.category, o.duration_ns});
              }
              queue.push(std::move(rows));
              break;
            }
          }
        });
      }
    }
    queue.close();
  }
  if (write_error) return unexpected(*write_error);

  auto kept = compact_store(options.store_path);
  if (!kept) return unexpected(kept.error());

  std::map<std::string, std::vector<Occurrence>> seen;
  for (const auto& b : batches) {
    BatchEntry entry;
    entry.batch_id = b.batch_id;
    entry.path = b.path.string();
    entry.cert_count = b.records.size();
    entry.ingest_errors = b.errors.size();
    for (const auto& e : b.errors) manifest.ingest_errors.push_back({b.batch_id, e.line_no, e.message});
    for (const auto& r : b.records) seen[r.fingerprint].push_back({r.batch_id, r.line_no});
    manifest.batches.push_back(std::move(entry));
  }
  for (std::size_t t = 0; t < task_count; ++t) {
    const ParserRef& parser = parsers[t / batches.size()];
    BatchEntry& entry = manifest.batches[t % batches.size()];
    entry.durations_ns[parser.parser_id] = results[t].duration_ns;
    if (results[t].failure) {
      entry.failed_parsers.insert(parser.parser_id);
      manifest.failures.push_back({parser.parser_id, entry.batch_id, results[t].attempts, *results[t].failure});
    }
  }
  for (auto& [fp, occ] : seen) {
    if (occ.size() > 1) manifest.duplicates.push_back({fp, std::move(occ)});
  }

  if (!options.manifest_path.empty()) {
    if (auto e = manifest.save(options.manifest_path)) return unexpected(*e);
  }
  return RunResult{std::move(manifest), *kept};
}

}  // namespace parseval::harness
