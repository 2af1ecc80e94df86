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

#include "parseval/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace parseval::analytics {

namespace {

using boost::multiprecision::cpp_int;

std::size_t category_index(ErrorCategory c) {
  for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
    if (kAllCategories[i] == c) return i;
  }
  return 0;
}

std::set<std::string> fingerprints_of(const std::vector<OutcomeRow>& rows, const std::string& parser_id,
                                      std::optional<ErrorCategory> category) {
  std::set<std::string> out;
  for (const auto& r : rows) {
    if (r.parser_id == parser_id && (!category || r.category == *category)) out.insert(r.fingerprint);
  }
  return out;
}

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v, int decimals) { return v ? fixed(*v, decimals) : "n.a."; }

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

// Left-aligned first column, right-aligned numbers.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return {};
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string pad(width[i] - r[i].size(), ' ');
      if (i > 0) line += "  ";
      line += i == 0 ? r[i] + pad : pad + r[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string category_label(const std::optional<ErrorCategory>& c) {
  return c ? std::string(to_string(*c)) : std::string("ANY");
}

}  // namespace

std::string format_percent(std::uint64_t num, std::uint64_t den, int decimals) {
  if (den == 0) return "n.a.";
  decimals = std::clamp(decimals, 0, 18);
  cpp_int scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // round(num * 100 * 10^d / den), half up
  const cpp_int scaled = (cpp_int(num) * 100 * scale * 2 + den) / (cpp_int(den) * 2);
  const cpp_int whole = scaled / scale;
  std::string out = whole.str();
  if (decimals > 0) {
    std::string frac = cpp_int(scaled % scale).str();
    out += "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
  }
  return out + "%";
}

Expected<ErrorRate, std::string> error_rate(std::uint64_t errors, std::uint64_t total, std::string parser_id) {
  if (total == 0) return unexpected("error rate undefined: N = 0" + (parser_id.empty() ? "" : " for " + parser_id));
  if (errors > total) {
    return unexpected("error count " + std::to_string(errors) + " exceeds N = " + std::to_string(total));
  }
  return ErrorRate{std::move(parser_id), errors, total, static_cast<double>(errors) / static_cast<double>(total)};
}

std::uint64_t CategoryDistribution::count(ErrorCategory c) const { return counts[category_index(c)]; }

std::uint64_t CategoryDistribution::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::optional<double> CategoryDistribution::share(ErrorCategory c) const { return ratio(count(c), total()); }

CategoryDistribution category_distribution(const std::vector<OutcomeRow>& rows, const std::string& parser_id) {
  CategoryDistribution d;
  d.parser_id = parser_id;
  for (const auto& r : rows) {
    if (r.parser_id == parser_id) ++d.counts[category_index(r.category)];
  }
  return d;
}

Overlap overlap_of_sets(const std::set<std::string>& a, const std::set<std::string>& b) {
  Overlap o;
  o.size_a = a.size();
  o.size_b = b.size();
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  o.intersection = common.size();
  o.union_size = o.size_a + o.size_b - o.intersection;
  o.match_fraction_a = ratio(o.intersection, o.size_a);
  o.match_fraction_b = ratio(o.intersection, o.size_b);
  o.jaccard = ratio(o.intersection, o.union_size);
  return o;
}

Overlap overlap(const std::vector<OutcomeRow>& rows, const std::string& parser_a, const std::string& parser_b,
                std::optional<ErrorCategory> category) {
  Overlap o = overlap_of_sets(fingerprints_of(rows, parser_a, category), fingerprints_of(rows, parser_b, category));
  o.parser_a = parser_a;
  o.parser_b = parser_b;
  o.category = category;
  return o;
}

Expected<Selector, std::string> Selector::parse(std::string_view spec) {
  if (spec == "any") return any();
  if (spec.starts_with("category:")) {
    auto c = category_from_string(spec.substr(9));
    if (!c) return unexpected("unknown category '" + std::string(spec.substr(9)) + "'");
    return by_category(*c);
  }
  if (spec.starts_with("prefix:")) return by_error_prefix(std::string(spec.substr(7)));
  if (spec.starts_with("check:") && spec.size() > 6) return by_check_id(std::string(spec.substr(6)));
  return unexpected("selector must be any, category:<NAME>, prefix:<text> or check:<id>");
}

bool Selector::matches(const OutcomeRow& row) const {
  switch (kind) {
    case Kind::kAny: return true;
    case Kind::kCategory: return row.category == category;
    case Kind::kErrorPrefix: return row.error_string.starts_with(text);
    case Kind::kCheckId: return row.error_string.starts_with(text + ":");
  }
  return false;
}

std::string Selector::describe() const {
  switch (kind) {
    case Kind::kAny: return "any";
    case Kind::kCategory: return "category:" + std::string(to_string(category));
    case Kind::kErrorPrefix: return "prefix:" + text;
    case Kind::kCheckId: return "check:" + text;
  }
  return {};
}

Expected<DiscrepancyTable, std::string> discrepancy_table(const std::vector<OutcomeRow>& rows,
                                                          const RunManifest& manifest, const std::string& reference,
                                                          const Selector& selector) {
  if (!manifest.has_parser(reference)) return unexpected("unknown reference parser " + reference);
  std::set<std::string> selected;
  for (const auto& r : rows) {
    if (r.parser_id == reference && selector.matches(r)) selected.insert(r.fingerprint);
  }
  DiscrepancyTable t{reference, selector.describe(), selected.size(), {}};
  for (const auto& p : manifest.parsers) {
    std::set<std::string> rejected;
    for (const auto& r : rows) {
      if (r.parser_id == p.parser_id && selected.contains(r.fingerprint)) rejected.insert(r.fingerprint);
    }
    t.entries.push_back({p.parser_id, rejected.size()});
  }
  return t;
}

std::vector<DiscrepancyRow> discrepancy_rows(const std::vector<OutcomeRow>& rows, const RunManifest& manifest) {
  std::map<std::string, DiscrepancyRow> by_fp;
  for (const auto& r : rows) {
    auto& row = by_fp[r.fingerprint];
    row.fingerprint = r.fingerprint;
    row.outcomes[r.parser_id] = r.category;
  }
  std::vector<DiscrepancyRow> out;
  for (auto& [fp, row] : by_fp) {
    for (const auto& p : manifest.parsers) row.outcomes.try_emplace(p.parser_id, std::nullopt);
    bool any_accept = false, any_reject = false;
    for (const auto& [pid, outcome] : row.outcomes) (outcome ? any_reject : any_accept) = true;
    row.disagreement = any_accept && any_reject;
    out.push_back(std::move(row));
  }
  return out;
}

Expected<TimingStats, std::string> timing_stats(const RunManifest& manifest, const std::string& parser_id) {
  TimingStats s;
  s.parser_id = parser_id;
  std::vector<double> per_cert;
  for (const auto& b : manifest.batches) {
    const auto it = b.durations_ns.find(parser_id);
    if (it == b.durations_ns.end() || b.cert_count == 0 || b.failed_parsers.contains(parser_id)) continue;
    const double pc = static_cast<double>(it->second) / static_cast<double>(b.cert_count);
    s.batches.push_back({parser_id, b.batch_id, b.cert_count, it->second, pc});
    per_cert.push_back(pc);
  }
  if (per_cert.empty()) return unexpected("no timed batches for parser " + parser_id);
  std::sort(per_cert.begin(), per_cert.end());
  const std::size_t n = per_cert.size();
  s.min_ns = per_cert.front();
  s.max_ns = per_cert.back();
  s.median_ns = n % 2 ? per_cert[n / 2] : (per_cert[n / 2 - 1] + per_cert[n / 2]) / 2.0;
  s.mean_ns = std::accumulate(per_cert.begin(), per_cert.end(), 0.0) / static_cast<double>(n);
  return s;
}

std::optional<std::string> check_consistency(const std::vector<OutcomeRow>& rows, const RunManifest& manifest) {
  if (manifest.total_certificates() == 0) return "N = 0: the manifest lists no certificates";
  for (const auto& b : manifest.batches) {
    if (b.cert_count == 0) return "batch " + b.batch_id + " has no certificates";
  }
  for (const auto& r : rows) {
    if (!manifest.has_parser(r.parser_id)) return "store row for unknown parser " + r.parser_id;
    const auto* b = manifest.find_batch(r.batch_id);
    if (!b) return "store row for unknown batch " + r.batch_id;
    if (b->failed_parsers.contains(r.parser_id)) {
      return "store row for batch " + r.batch_id + " which failed for parser " + r.parser_id;
    }
  }
  return std::nullopt;
}

Expected<Report, std::string> build_report(const std::vector<OutcomeRow>& rows, const RunManifest& manifest,
                                           const ReportOptions& options) {
  if (auto e = check_consistency(rows, manifest)) return unexpected(*e);
  if (manifest.parsers.empty()) return unexpected(std::string("manifest lists no parsers"));

  Report rep;
  rep.run_id = manifest.run_id;
  rep.table_version = manifest.table_version;
  rep.total = manifest.total_certificates();

  std::map<std::string, std::uint64_t> row_counts;
  for (const auto& r : rows) ++row_counts[r.parser_id];

  for (const auto& p : manifest.parsers) {
    const std::uint64_t n_e = row_counts[p.parser_id];
    auto rate = error_rate(n_e, manifest.certificates_for(p.parser_id), p.parser_id);
    if (!rate) return unexpected(rate.error());
    rep.rates.push_back(*rate);

    auto dist = category_distribution(rows, p.parser_id);
    if (dist.total() != n_e) {
      return unexpected("row-sum check failed for " + p.parser_id + ": categories sum to " +
                        std::to_string(dist.total()) + ", store has " + std::to_string(n_e) + " rows");
    }
    rep.distributions.push_back(dist);

    if (auto t = timing_stats(manifest, p.parser_id)) rep.timings.push_back(std::move(*t));
  }
  std::stable_sort(rep.rates.begin(), rep.rates.end(),
                   [](const ErrorRate& a, const ErrorRate& b) { return a.ratio > b.ratio; });
  for (const auto& r : rep.rates) {
    if (r.ratio < 0.0 || r.ratio > 1.0) return unexpected("rate out of bounds for " + r.parser_id);
  }

  for (std::size_t i = 0; i < manifest.parsers.size(); ++i) {
    for (std::size_t j = i + 1; j < manifest.parsers.size(); ++j) {
      const auto& a = manifest.parsers[i].parser_id;
      const auto& b = manifest.parsers[j].parser_id;
      rep.overlaps.push_back(overlap(rows, a, b, std::nullopt));
      for (ErrorCategory c : kAllCategories) {
        Overlap o = overlap(rows, a, b, c);
        if (o.union_size > 0) rep.overlaps.push_back(std::move(o));
      }
    }
  }

  const std::string reference = options.reference.empty() ? manifest.parsers.front().parser_id : options.reference;
  auto disc = discrepancy_table(rows, manifest, reference, options.selector);
  if (!disc) return unexpected(disc.error());
  rep.discrepancies = std::move(*disc);
  return rep;
}

std::optional<ReportFormat> report_format_from_string(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  return std::nullopt;
}

namespace {

std::string render_json(const Report& rep, int decimals) {
  using json = nlohmann::ordered_json;
  json j;
  j["run_id"] = rep.run_id;
  j["table_version"] = rep.table_version;
  j["total_certificates"] = rep.total;
  j["rates"] = json::array();
  for (const auto& r : rep.rates) {
    j["rates"].push_back({{"parser_id", r.parser_id},
                          {"errors", r.errors},
                          {"total", r.total},
                          {"ratio", r.ratio},
                          {"percent", r.percent(decimals)}});
  }
  j["distributions"] = json::array();
  for (const auto& d : rep.distributions) {
    json counts = json::object();
    json shares = json::object();
    for (ErrorCategory c : kAllCategories) {
      counts[std::string(to_string(c))] = d.count(c);
      shares[std::string(to_string(c))] = opt_json(d.share(c));
    }
    j["distributions"].push_back({{"parser_id", d.parser_id}, {"counts", counts}, {"shares", shares},
                                  {"sum", d.total()}});
  }
  j["overlaps"] = json::array();
  for (const auto& o : rep.overlaps) {
    j["overlaps"].push_back({{"parser_a", o.parser_a},
                             {"parser_b", o.parser_b},
                             {"category", category_label(o.category)},
                             {"size_a", o.size_a},
                             {"size_b", o.size_b},
                             {"intersection", o.intersection},
                             {"match_fraction_a", opt_json(o.match_fraction_a)},
                             {"match_fraction_b", opt_json(o.match_fraction_b)},
                             {"jaccard", opt_json(o.jaccard)}});
  }
  if (rep.discrepancies) {
    json entries = json::array();
    for (const auto& e : rep.discrepancies->entries) entries.push_back({{"parser_id", e.parser_id}, {"count", e.count}});
    j["discrepancies"] = {{"reference", rep.discrepancies->reference},
                          {"selector", rep.discrepancies->selector},
                          {"selected", rep.discrepancies->selected},
                          {"counts", entries}};
  } else {
    j["discrepancies"] = nullptr;
  }
  j["timings"] = json::array();
  for (const auto& t : rep.timings) {
    json per_batch = json::array();
    for (const auto& b : t.batches) {
      per_batch.push_back({{"batch_id", b.batch_id}, {"cert_count", b.cert_count}, {"wall_ns", b.wall_ns},
                           {"per_cert_ns", b.per_cert_ns}});
    }
    j["timings"].push_back({{"parser_id", t.parser_id},
                            {"min_ns", t.min_ns},
                            {"median_ns", t.median_ns},
                            {"max_ns", t.max_ns},
                            {"mean_ns", t.mean_ns},
                            {"batches", per_batch}});
  }
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string render_text(const Report& rep, int decimals) {
  std::ostringstream out;
  out << "run " << rep.run_id << "  table " << rep.table_version << "  N " << rep.total << "\n\n";

  out << "Error rates\n";
  std::vector<std::vector<std::string>> t{{"parser", "errors", "N", "rate"}};
  for (const auto& r : rep.rates) {
    t.push_back({r.parser_id, std::to_string(r.errors), std::to_string(r.total), r.percent(decimals)});
  }
  out << render_table(t) << "\n";

  out << "Error categories\n";
  t = {{"parser"}};
  for (ErrorCategory c : kAllCategories) t[0].push_back(std::string(to_string(c)));
  t[0].push_back("Sum");
  for (const auto& d : rep.distributions) {
    std::vector<std::string> row{d.parser_id};
    for (ErrorCategory c : kAllCategories) row.push_back(d.count(c) ? std::to_string(d.count(c)) : "n.a.");
    row.push_back(std::to_string(d.total()));
    t.push_back(std::move(row));
  }
  out << render_table(t) << "\n";

  if (!rep.overlaps.empty()) {
    out << "Overlaps\n";
    t = {{"parser_a", "parser_b", "category", "|A|", "|B|", "|A&B|", "match_a", "match_b", "jaccard"}};
    for (const auto& o : rep.overlaps) {
      t.push_back({o.parser_a, o.parser_b, category_label(o.category), std::to_string(o.size_a),
                   std::to_string(o.size_b), std::to_string(o.intersection), opt_fixed(o.match_fraction_a, 4),
                   opt_fixed(o.match_fraction_b, 4), opt_fixed(o.jaccard, 4)});
    }
    out << render_table(t) << "\n";
  }

  if (rep.discrepancies) {
    out << "Discrepancies (reference " << rep.discrepancies->reference << ", " << rep.discrepancies->selector
        << ", " << rep.discrepancies->selected << " selected)\n";
    t = {{"parser", "rejected"}};
    for (const auto& e : rep.discrepancies->entries) t.push_back({e.parser_id, std::to_string(e.count)});
    out << render_table(t) << "\n";
  }

  out << "Per-certificate time (ns)\n";
  t = {{"parser", "batches", "min", "median", "max", "mean"}};
  for (const auto& s : rep.timings) {
    t.push_back({s.parser_id, std::to_string(s.batches.size()), fixed(s.min_ns, 1), fixed(s.median_ns, 1),
                 fixed(s.max_ns, 1), fixed(s.mean_ns, 1)});
  }
  out << render_table(t);
  return out.str();
}

// section,parser,key,value
std::string render_csv(const Report& rep, int decimals) {
  std::ostringstream out;
  out << "section,parser_id,key,value\n";
  auto line = [&](std::string_view section, std::string_view parser, std::string_view key, const std::string& value) {
    out << section << ',' << csv_field(parser) << ',' << csv_field(key) << ',' << csv_field(value) << '\n';
  };
  for (const auto& r : rep.rates) {
    line("rates", r.parser_id, "errors", std::to_string(r.errors));
    line("rates", r.parser_id, "total", std::to_string(r.total));
    line("rates", r.parser_id, "percent", r.percent(decimals));
  }
  for (const auto& d : rep.distributions) {
    for (ErrorCategory c : kAllCategories) line("distributions", d.parser_id, to_string(c), std::to_string(d.count(c)));
    line("distributions", d.parser_id, "Sum", std::to_string(d.total()));
  }
  for (const auto& o : rep.overlaps) {
    const std::string pair = o.parser_a + "|" + o.parser_b;
    const std::string cat = category_label(o.category);
    line("overlaps", pair, cat + ":intersection", std::to_string(o.intersection));
    line("overlaps", pair, cat + ":match_fraction_a", opt_fixed(o.match_fraction_a, 6));
    line("overlaps", pair, cat + ":match_fraction_b", opt_fixed(o.match_fraction_b, 6));
    line("overlaps", pair, cat + ":jaccard", opt_fixed(o.jaccard, 6));
  }
  if (rep.discrepancies) {
    for (const auto& e : rep.discrepancies->entries) {
      line("discrepancies", e.parser_id, rep.discrepancies->reference + " " + rep.discrepancies->selector,
           std::to_string(e.count));
    }
  }
  for (const auto& s : rep.timings) {
    line("timings", s.parser_id, "min_ns", fixed(s.min_ns, 1));
    line("timings", s.parser_id, "median_ns", fixed(s.median_ns, 1));
    line("timings", s.parser_id, "max_ns", fixed(s.max_ns, 1));
    line("timings", s.parser_id, "mean_ns", fixed(s.mean_ns, 1));
  }
  return out.str();
}

}  // namespace

std::string render(const Report& report, ReportFormat format, int decimals) {
  switch (format) {
    case ReportFormat::kJson: return render_json(report, decimals);
    case ReportFormat::kText: return render_text(report, decimals);
    case ReportFormat::kCsv: return render_csv(report, decimals);
  }
  return {};
}

}  // namespace parseval::analytics
