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

#include "parseval/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "parseval/analytics.hpp"
#include "parseval/certgen.hpp"
#include "parseval/codec.hpp"
#include "parseval/harness.hpp"
#include "parseval/version.hpp"
#include "parseval/x509.hpp"

namespace parseval::cli {

namespace fs = std::filesystem;

namespace {

struct ParseArgs {
  std::string input = "-";
  std::string profile = "strict";
};

struct GenArgs {
  std::string defect;
  std::string preset;
  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string sidecar;
};

struct RunArgs {
  std::vector<std::string> batches;
  std::string corpus;
  std::vector<std::string> parsers;
  std::string store;
  std::string manifest;
  std::string table;
  std::string run_id;
  std::size_t workers = 0;
  long timeout_ms = 60000;
  bool per_cert_timing = false;
};

struct ClassifyArgs {
  std::string parser_id;
  std::vector<std::string> strings;
  std::string table;
  bool validate = false;
  bool dump = false;
};

struct ReportArgs {
  std::string store;
  std::string manifest;
  std::string format = "text";
  int decimals = 2;
  std::string reference;
  std::string select = "any";
};

std::optional<std::string> read_all(const std::string& path, std::istream& in) {
  std::stringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  ss << f.rdbuf();
  return ss.str();
}

// DER, PEM, or a single base64 line.
std::optional<asn1::Bytes> decode_input(const std::string& raw) {
  if (raw.find("-----BEGIN") != std::string::npos) return unwrap_pem(raw);
  if (!raw.empty() && static_cast<std::uint8_t>(raw[0]) == 0x30) return asn1::Bytes(raw.begin(), raw.end());
  std::string compact;
  for (char c : raw) {
    if (c != '\n' && c != '\r' && c != ' ' && c != '\t') compact += c;
  }
  if (compact.empty()) return std::nullopt;
  return base64_decode(compact);
}

// Table from --table, then $PARSEVAL_TABLE, then the built-in one.
Expected<ClassificationTable, std::string> load_table(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv(kTableEnv); env && *env) path = env;
  }
  if (path.empty()) return ClassificationTable::builtin();
  auto t = ClassificationTable::load(path);
  if (!t) return unexpected(path + ":" + std::to_string(t.error().line) + ": " + t.error().message);
  return std::move(*t);
}

std::string describe_key(const x509::PublicKeyInfo& spki) {
  if (const auto* rsa = std::get_if<x509::RsaPublicKey>(&spki.key)) {
    return "RSA " + std::to_string(rsa->modulus == 0 ? 0 : boost::multiprecision::msb(rsa->modulus) + 1) + " bits, e=" +
           rsa->exponent.str();
  }
  if (const auto* ec = std::get_if<x509::EcPublicKey>(&spki.key)) {
    if (const auto* named = std::get_if<x509::NamedCurve>(&ec->curve)) return "EC " + std::string(to_string(*named));
    if (const auto* unknown = std::get_if<x509::UnknownCurve>(&ec->curve)) return "EC curve " + unknown->oid;
    return "EC explicit parameters";
  }
  return spki.algorithm.oid;
}

int cmd_parse(const ParseArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  auto profile = x509::ValidationProfile::from_name(a.profile);
  if (!profile) {
    err << "unknown profile '" << a.profile << "'\n";
    return kUsage;
  }
  const auto raw = read_all(a.input, in);
  if (!raw) {
    err << "cannot read " << a.input << "\n";
    return kUsage;
  }
  const auto der = decode_input(*raw);
  if (!der) {
    err << "input is neither DER, PEM nor base64\n";
    return kUsage;
  }
  auto result = x509::parse_certificate(*der, *profile);
  if (!result) {
    const auto& e = result.error();
    out << "REJECT\n"
        << "category: " << to_string(e.category) << "\n"
        << "check: " << e.check_id.value_or("-") << "\n"
        << "offset: " << (e.offset ? std::to_string(*e.offset) : "-") << "\n"
        << "error: " << e.to_error_string() << "\n";
    return kFailure;
  }
  const auto& c = *result;
  out << "ACCEPT\n"
      << "fingerprint: " << c.fingerprint() << "\n"
      << "version: " << c.version + 1 << "\n"
      << "serial: " << c.serial.str(0, std::ios_base::hex) << "\n"
      << "issuer: " << c.issuer.to_string() << "\n"
      << "subject: " << c.subject.to_string() << "\n"
      << "not_before: " << asn1::format_instant(c.not_before) << "\n"
      << "not_after: " << asn1::format_instant(c.not_after) << "\n"
      << "key: " << describe_key(c.spki) << "\n"
      << "extensions: " << c.extensions.size() << "\n";
  return kOk;
}

int cmd_gen(GenArgs a, std::ostream& out, std::ostream& err) {
  certgen::DefectSpec spec;
  spec.seed = a.seed;
  if (!a.preset.empty()) {
    const auto preset = certgen::preset_from_name(a.preset);
    if (!preset) {
      err << "unknown preset '" << a.preset << "'\n";
      return kUsage;
    }
    spec.defect = preset->defect;
    spec.count = a.count ? a.count : preset->count;
  } else {
    const auto defect = certgen::defect_from_string(a.defect.empty() ? "none" : a.defect);
    if (!defect) {
      err << "unknown defect '" << a.defect << "'\n";
      return kUsage;
    }
    spec.defect = *defect;
    spec.count = a.count ? a.count : 1;
  }

  const auto certs = certgen::generate(spec);
  std::string batch;
  std::string sidecar;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    batch += base64_encode(certs[i].der) + "\n";
    sidecar += certgen::sidecar_line(certs[i], i + 1) + "\n";
  }

  if (a.out.empty() || a.out == "-") {
    out << batch;
  } else {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!(f << batch)) {
      err << "cannot write " << a.out << "\n";
      return kFailure;
    }
  }
  if (!a.sidecar.empty()) {
    std::ofstream f(a.sidecar, std::ios::binary | std::ios::trunc);
    if (!(f << sidecar)) {
      err << "cannot write " << a.sidecar << "\n";
      return kFailure;
    }
  }
  return kOk;
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> corpus(a.batches.begin(), a.batches.end());
  if (!a.corpus.empty()) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(a.corpus)) {
      if (entry.is_regular_file()) found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end());
    corpus.insert(corpus.end(), found.begin(), found.end());
  }
  if (corpus.empty()) {
    err << "no batch files given (use --batch or --corpus)\n";
    return kUsage;
  }

  std::vector<harness::ParserRef> parsers;
  for (const auto& spec : a.parsers) {
    auto p = harness::ParserRef::parse(spec);
    if (!p) {
      err << p.error() << "\n";
      return kUsage;
    }
    parsers.push_back(std::move(*p));
  }
  auto table = load_table(a.table);
  if (!table) {
    err << table.error() << "\n";
    return kUsage;
  }

  harness::RunOptions opt;
  opt.workers = a.workers;
  opt.store_path = a.store;
  opt.manifest_path = a.manifest.empty() ? a.store + ".manifest.json" : a.manifest;
  opt.run_id = a.run_id;
  opt.per_cert_timing = a.per_cert_timing;
  opt.adapter_timeout = std::chrono::milliseconds(a.timeout_ms);
  opt.table = &*table;

  auto result = harness::run(corpus, parsers, opt);
  if (!result) {
    err << "run failed: " << result.error() << "\n";
    return kFailure;
  }
  const auto& m = result->manifest;
  out << "run_id: " << m.run_id << "\n"
      << "certificates: " << m.total_certificates() << "\n"
      << "rows: " << result->rows_written << "\n"
      << "store: " << opt.store_path.string() << "\n"
      << "manifest: " << opt.manifest_path.string() << "\n";
  for (const auto& e : m.ingest_errors) {
    err << "ingest error: " << e.batch_id << ":" << e.line_no << ": " << e.message << "\n";
  }
  for (const auto& f : m.failures) {
    err << "batch failed: " << f.parser_id << " on " << f.batch_id << " after " << f.attempts
        << " attempts: " << f.message << "\n";
  }
  return m.failures.empty() ? kOk : kFailure;
}

int cmd_classify(const ClassifyArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  auto table = load_table(a.table);
  if (!table) {
    err << table.error() << "\n";
    return kUsage;
  }
  if (a.dump) {
    out << table->serialize();
    return kOk;
  }
  if (a.validate) {
    const auto warnings = validate_table(*table);
    for (const auto& w : warnings) out << "warning: " << w.message << "\n";
    out << table->rules().size() << " rules, " << warnings.size() << " warnings, version " << table->version()
        << "\n";
    return warnings.empty() ? kOk : kFailure;
  }
  if (a.parser_id.empty()) {
    err << "--parser-id is required\n";
    return kUsage;
  }
  auto emit = [&](const std::string& s) {
    out << to_string(table->classify(a.parser_id, s)) << "\t" << s << "\n";
  };
  if (!a.strings.empty()) {
    for (const auto& s : a.strings) emit(s);
  } else {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      emit(line);
    }
  }
  return kOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  const auto format = analytics::report_format_from_string(a.format);
  if (!format) {
    err << "unknown format '" << a.format << "'\n";
    return kUsage;
  }
  auto selector = analytics::Selector::parse(a.select);
  if (!selector) {
    err << selector.error() << "\n";
    return kUsage;
  }
  auto manifest = harness::RunManifest::load(a.manifest);
  if (!manifest) {
    err << manifest.error() << "\n";
    return kFailure;
  }
  auto rows = harness::read_store(a.store);
  if (!rows) {
    err << rows.error() << "\n";
    return kFailure;
  }
  auto report = analytics::build_report(*rows, *manifest, {a.reference, *selector});
  if (!report) {
    err << "report failed: " << report.error() << "\n";
    return kFailure;
  }
  out << analytics::render(*report, *format, a.decimals);
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential conformance testing for X.509 certificate parsers", "parseval"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1, 1);

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse one certificate (DER, PEM or base64) with a built-in profile");
  parse->add_option("input", parse_args.input, "Certificate file, or - for stdin");
  parse->add_option("-p,--profile", parse_args.profile, "strict or lenient")
      ->check(CLI::IsMember({"strict", "lenient"}));

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic batch file");
  auto* defect_opt = gen->add_option("-d,--defect", gen_args.defect, "Defect id (default: none)");
  gen->add_option("--preset", gen_args.preset, "Named preset: version-160, rsa-exponent-264, ec-point-17")
      ->excludes(defect_opt);
  gen->add_option("-n,--count", gen_args.count, "Number of certificates")->check(CLI::PositiveNumber);
  gen->add_option("-s,--seed", gen_args.seed, "Generator seed");
  gen->add_option("-o,--out", gen_args.out, "Batch file to write (default: stdout)");
  gen->add_option("--sidecar", gen_args.sidecar, "Ground-truth JSON-lines file to write");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run parsers over batch files");
  run->add_option("-b,--batch", run_args.batches, "Batch file (repeatable)")->check(CLI::ExistingFile);
  run->add_option("-c,--corpus", run_args.corpus, "Directory of batch files")->check(CLI::ExistingDirectory);
  run->add_option("-P,--parser", run_args.parsers, "builtin:strict, builtin:lenient or exec:<command>")
      ->required();
  run->add_option("--store", run_args.store, "Outcome store to write")->required();
  run->add_option("--manifest", run_args.manifest, "Manifest to write (default: <store>.manifest.json)");
  run->add_option("--table", run_args.table, "Classification table file");
  run->add_option("--run-id", run_args.run_id, "Run id (default: derived from the inputs)");
  run->add_option("-j,--workers", run_args.workers, "Worker threads (default: CPU count)");
  run->add_option("--timeout-ms", run_args.timeout_ms, "Adapter timeout per batch")->check(CLI::PositiveNumber);
  run->add_flag("--per-cert-timing", run_args.per_cert_timing, "Store per-certificate durations");

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Classify error strings with the taxonomy table");
  classify->add_option("--parser-id", classify_args.parser_id, "Parser the strings came from");
  classify->add_option("strings", classify_args.strings, "Error strings (default: one per stdin line)");
  classify->add_option("--table", classify_args.table, "Classification table file");
  classify->add_flag("--validate", classify_args.validate, "Report unreachable and duplicate rules");
  classify->add_flag("--dump", classify_args.dump, "Print the table in file format");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Compute metrics from a store and manifest");
  report->add_option("--store", report_args.store, "Outcome store")->required()->check(CLI::ExistingFile);
  report->add_option("--manifest", report_args.manifest, "Run manifest")->required()->check(CLI::ExistingFile);
  report->add_option("-f,--format", report_args.format, "json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  report->add_option("--decimals", report_args.decimals, "Decimals for percentages")->check(CLI::Range(0, 12));
  report->add_option("--reference", report_args.reference, "Reference parser for the discrepancy table");
  report->add_option("--select", report_args.select, "any, category:<NAME>, prefix:<text> or check:<id>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(parse_args, in, out, err);
    if (*gen) return cmd_gen(gen_args, out, err);
    if (*run) return cmd_run(run_args, out, err);
    if (*classify) return cmd_classify(classify_args, in, out, err);
    if (*report) return cmd_report(report_args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace parseval::cli
