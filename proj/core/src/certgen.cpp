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

#include "parseval/certgen.hpp"

#include <array>
#include <random>

#include <boost/multiprecision/integer.hpp>
#include "json.hpp"

#include "parseval/codec.hpp"
#include "parseval/curves.hpp"
#include "parseval/oids.hpp"

namespace parseval::certgen {

using asn1::Bytes;
using asn1::Value;
namespace tag = asn1::tag;

namespace {

constexpr std::array<Defect, 15> kDefects = {
    Defect::kNone,           Defect::kInvalidVersion,     Defect::kRsaBadExponent, Defect::kRsaEvenModulus,
    Defect::kEcBadPoint,     Defect::kEcUnknownCurve,     Defect::kBadUtcTime,     Defect::kBadUri,
    Defect::kBadIpLength,    Defect::kDuplicateExtension, Defect::kSigAlgMismatch, Defect::kValidityReversed,
    Defect::kUnknownCriticalExt, Defect::kTruncated,      Defect::kNonMinimalLength,
};

constexpr std::array<std::string_view, 15> kDefectIds = {
    "none",          "invalid-version",     "rsa-bad-exponent", "rsa-even-modulus",
    "ec-bad-point",  "ec-unknown-curve",    "bad-utctime",      "bad-uri",
    "bad-ip-length", "duplicate-extension", "sig-alg-mismatch", "validity-reversed",
    "unknown-critical-ext", "truncated",    "non-minimal-length",
};

constexpr std::array<Preset, 3> kPresets = {{
    {"version-160", Defect::kInvalidVersion, 160},
    {"rsa-exponent-264", Defect::kRsaBadExponent, 264},
    {"ec-point-17", Defect::kEcBadPoint, 17},
}};

constexpr std::string_view kUnknownCriticalOid = "1.3.6.1.4.1.55555.1";
constexpr std::string_view kBrainpoolP256r1 = "1.3.36.3.3.2.8.1.1.7";

std::mt19937_64 engine_for(std::uint64_t seed, std::size_t index) {
  const std::uint64_t i = index;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return std::mt19937_64(seq);
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out;
  out.reserve(n + 8);
  while (out.size() < n) {
    std::uint64_t w = rng();
    for (int k = 0; k < 8 && out.size() < n; ++k, w >>= 8) out.push_back(static_cast<std::uint8_t>(w));
  }
  return out;
}

BigInt to_bigint(const Bytes& be) {
  BigInt v;
  boost::multiprecision::import_bits(v, be.begin(), be.end(), 8);
  return v;
}

Bytes to_fixed_bytes(const BigInt& v, std::size_t n) {
  Bytes raw;
  boost::multiprecision::export_bits(v, std::back_inserter(raw), 8);
  if (v == 0) raw.clear();
  Bytes out(n - raw.size(), 0);
  out.insert(out.end(), raw.begin(), raw.end());
  return out;
}

Bytes uncompressed_point(const BigInt& x, const BigInt& y, std::size_t field_bytes) {
  Bytes out{0x04};
  const Bytes xb = to_fixed_bytes(x, field_bytes);
  const Bytes yb = to_fixed_bytes(y, field_bytes);
  out.insert(out.end(), xb.begin(), xb.end());
  out.insert(out.end(), yb.begin(), yb.end());
  return out;
}

// Random point on P-256. The field prime is 3 mod 4, so a square root of
// r is r^((p+1)/4) whenever r is a quadratic residue.
std::pair<BigInt, BigInt> random_p256_point(std::mt19937_64& rng) {
  const auto& c = x509::curve_params(x509::NamedCurve::kP256);
  const BigInt legendre_exp = (c.p - 1) / 2;
  const BigInt sqrt_exp = (c.p + 1) / 4;
  for (;;) {
    const BigInt x = x509::mod(to_bigint(random_bytes(rng, c.field_bytes)), c.p);
    const BigInt rhs = x509::mod(x * x * x + c.a * x + c.b, c.p);
    if (rhs == 0 || boost::multiprecision::powm(rhs, legendre_exp, c.p) != 1) continue;
    return {x, boost::multiprecision::powm(rhs, sqrt_exp, c.p)};
  }
}

Value algorithm(std::string_view oid, bool null_params) {
  std::vector<Value> parts{asn1::make_oid(oid)};
  if (null_params) parts.push_back(asn1::make_null());
  return asn1::make_sequence(std::move(parts));
}

Value name(const std::string& cn) {
  return asn1::make_sequence({asn1::make_set({asn1::make_sequence(
      {asn1::make_oid(oid::kCommonName), asn1::make_string(tag::kUtf8String, cn)})})});
}

Value key_usage_value(std::uint16_t bits) {
  Bytes bytes(2, 0);
  for (int i = 0; i < 16; ++i) {
    if (bits & (1u << i)) bytes[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  }
  while (!bytes.empty() && bytes.back() == 0) bytes.pop_back();
  std::uint8_t unused = 0;
  if (!bytes.empty()) {
    while (!(bytes.back() & (1u << unused))) ++unused;
  }
  return asn1::make_bit_string(bytes, unused);
}

Value extension(std::string_view oid, bool critical, Bytes value) {
  std::vector<Value> parts{asn1::make_oid(oid)};
  if (critical) parts.push_back(asn1::make_boolean(true));
  parts.push_back(asn1::make_octet_string(std::move(value)));
  return asn1::make_sequence(std::move(parts));
}

Bytes basic_constraints(bool ca) {
  std::vector<Value> parts;
  if (ca) parts.push_back(asn1::make_boolean(true));
  return asn1::encode(asn1::make_sequence(std::move(parts)));
}

Value spki(const std::variant<RsaKeySpec, EcKeySpec>& key) {
  if (const auto* rsa = std::get_if<RsaKeySpec>(&key)) {
    const Bytes inner =
        asn1::encode(asn1::make_sequence({asn1::make_integer(rsa->modulus), asn1::make_integer(rsa->exponent)}));
    return asn1::make_sequence({algorithm(oid::kRsaEncryption, true), asn1::make_bit_string(inner)});
  }
  const auto& ec = std::get<EcKeySpec>(key);
  return asn1::make_sequence(
      {asn1::make_sequence({asn1::make_oid(oid::kEcPublicKey), asn1::make_oid(ec.curve_oid)}),
       asn1::make_bit_string(ec.point)});
}

void append(Bytes& out, const Bytes& more) { out.insert(out.end(), more.begin(), more.end()); }

}  // namespace

std::span<const Defect> all_defects() { return kDefects; }

std::string_view to_string(Defect defect) { return kDefectIds[static_cast<std::size_t>(defect)]; }

std::optional<Defect> defect_from_string(std::string_view id) {
  for (std::size_t i = 0; i < kDefectIds.size(); ++i) {
    if (kDefectIds[i] == id) return kDefects[i];
  }
  return std::nullopt;
}

std::span<const Preset> presets() { return kPresets; }

std::optional<Preset> preset_from_name(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

GroundTruth ground_truth(Defect defect) {
  using C = ErrorCategory;
  switch (defect) {
    case Defect::kNone: return {};
    case Defect::kInvalidVersion: return {std::nullopt, C::kX509ValueError};
    case Defect::kRsaBadExponent: return {std::nullopt, C::kCryptoValueError};
    case Defect::kRsaEvenModulus: return {std::nullopt, C::kCryptoValueError};
    case Defect::kEcBadPoint: return {std::nullopt, C::kCryptoValueError};
    case Defect::kEcUnknownCurve: return {std::nullopt, C::kCryptoUnsupported};
    case Defect::kBadUtcTime: return {std::nullopt, C::kAsn1ParseError};
    case Defect::kBadUri: return {std::nullopt, C::kX509ParseError};
    case Defect::kBadIpLength: return {std::nullopt, C::kX509ParseError};
    case Defect::kDuplicateExtension: return {std::nullopt, C::kX509ValueError};
    case Defect::kSigAlgMismatch: return {std::nullopt, C::kX509ValueError};
    case Defect::kValidityReversed: return {std::nullopt, C::kX509ValueError};
    case Defect::kUnknownCriticalExt: return {std::nullopt, C::kX509Unsupported};
    case Defect::kTruncated: return {C::kAsn1ParseError, C::kAsn1ParseError};
    case Defect::kNonMinimalLength: return {C::kAsn1ParseError, C::kAsn1ParseError};
  }
  return {};
}

std::optional<ErrorCategory> expected_for(const GroundTruth& truth, std::string_view profile_name) {
  return profile_name == "strict" ? truth.strict : truth.lenient;
}

KeyKind key_kind_for(Defect defect) {
  return defect == Defect::kEcBadPoint || defect == Defect::kEcUnknownCurve ? KeyKind::kEc : KeyKind::kRsa;
}

CertificateTemplate baseline(std::uint64_t seed, std::size_t index, KeyKind kind) {
  auto rng = engine_for(seed, index);
  CertificateTemplate t;

  // 16 octets: 8 random, 8 carrying the index, so serials never collide.
  Bytes serial = random_bytes(rng, 8);
  serial[0] = static_cast<std::uint8_t>((serial[0] & 0x3F) | 0x40);
  for (int k = 7; k >= 0; --k) serial.push_back(static_cast<std::uint8_t>(std::uint64_t{index} >> (k * 8)));
  t.serial = to_bigint(serial);

  t.issuer_cn = "parseval test issuer";
  t.subject_cn = "host-" + std::to_string(index) + ".example.com";
  t.not_before = "230701000000Z";
  t.not_after = "240701000000Z";

  if (kind == KeyKind::kRsa) {
    t.tbs_signature_oid = t.outer_signature_oid = std::string(oid::kSha256WithRsa);
    t.signature_null_params = true;
    Bytes modulus = random_bytes(rng, 256);
    modulus.front() |= 0x80;
    modulus.back() |= 0x01;
    t.key = RsaKeySpec{to_bigint(modulus), 65537};
    t.signature = random_bytes(rng, 256);
  } else {
    t.tbs_signature_oid = t.outer_signature_oid = std::string(oid::kEcdsaWithSha256);
    t.signature_null_params = false;
    const auto [x, y] = random_p256_point(rng);
    const auto& c = x509::curve_params(x509::NamedCurve::kP256);
    t.key = EcKeySpec{c.oid, uncompressed_point(x, y, c.field_bytes)};
    t.signature = random_bytes(rng, 72);
  }

  const std::string host = t.subject_cn;
  t.san.push_back({x509::GeneralNameType::kDnsName, Bytes(host.begin(), host.end())});
  const std::string uri = "https://" + host + "/";
  t.san.push_back({x509::GeneralNameType::kUri, Bytes(uri.begin(), uri.end())});
  t.san.push_back({x509::GeneralNameType::kIpAddress,
                   {192, 0, 2, static_cast<std::uint8_t>(1 + index % 254)}});
  return t;
}

void apply_defect(CertificateTemplate& t, Defect defect, std::size_t index) {
  switch (defect) {
    case Defect::kNone:
      break;
    case Defect::kInvalidVersion:
      t.version = 3 + static_cast<std::int64_t>(index % 3);
      break;
    case Defect::kRsaBadExponent:
      std::get<RsaKeySpec>(t.key).exponent = index % 2 == 0 ? 1 : 65536;
      break;
    case Defect::kRsaEvenModulus:
      std::get<RsaKeySpec>(t.key).modulus -= 1;
      break;
    case Defect::kEcBadPoint: {
      auto& ec = std::get<EcKeySpec>(t.key);
      const auto& c = x509::curve_params(x509::NamedCurve::kP256);
      const std::size_t n = c.field_bytes;
      const BigInt x = to_bigint(Bytes(ec.point.begin() + 1, ec.point.begin() + 1 + n));
      BigInt y = to_bigint(Bytes(ec.point.begin() + 1 + n, ec.point.end()));
      do {
        y = x509::mod(y + 1, c.p);
      } while (x509::is_on_curve(c, x, y));
      ec.point = uncompressed_point(x, y, n);
      break;
    }
    case Defect::kEcUnknownCurve:
      std::get<EcKeySpec>(t.key).curve_oid =
          index % 2 == 0 ? x509::curve_params(x509::NamedCurve::kSecp256k1).oid : std::string(kBrainpoolP256r1);
      break;
    case Defect::kBadUtcTime:
      if (index % 2 == 0) t.not_before = "2307010000Z";
      else t.not_before = "230701000000+0100";
      break;
    case Defect::kBadUri:
      for (auto& e : t.san) {
        if (e.type == x509::GeneralNameType::kUri) {
          const std::string bad = "http://[::1";
          e.value.assign(bad.begin(), bad.end());
        }
      }
      break;
    case Defect::kBadIpLength:
      for (auto& e : t.san) {
        if (e.type == x509::GeneralNameType::kIpAddress) e.value.push_back(0);
      }
      break;
    case Defect::kDuplicateExtension:
      t.extra_extensions.push_back({std::string(oid::kBasicConstraints), false, basic_constraints(t.ca)});
      break;
    case Defect::kSigAlgMismatch:
      t.tbs_signature_oid = std::string(oid::kSha256WithRsa);
      t.outer_signature_oid = std::string(oid::kSha384WithRsa);
      break;
    case Defect::kValidityReversed:
      std::swap(t.not_before, t.not_after);
      break;
    case Defect::kUnknownCriticalExt:
      t.extra_extensions.push_back({std::string(kUnknownCriticalOid), true, asn1::encode(asn1::make_null())});
      break;
    case Defect::kTruncated:
      t.truncate_bytes = 1 + index % 16;
      break;
    case Defect::kNonMinimalLength:
      t.serial_length_octets = 1 + index % 2;
      break;
  }
}

Bytes build(const CertificateTemplate& t) {
  Bytes tbs_content;
  if (t.version) append(tbs_content, asn1::encode(asn1::make_explicit(0, asn1::make_integer(*t.version))));

  const Bytes serial = asn1::encode_integer_content(t.serial);
  asn1::append_header(tbs_content, asn1::Tag::universal(tag::kInteger), serial.size(), t.serial_length_octets);
  append(tbs_content, serial);

  append(tbs_content, asn1::encode(algorithm(t.tbs_signature_oid, t.signature_null_params)));
  append(tbs_content, asn1::encode(name(t.issuer_cn)));
  append(tbs_content, asn1::encode(asn1::make_sequence({asn1::make_string(tag::kUtcTime, t.not_before),
                                                         asn1::make_string(tag::kUtcTime, t.not_after)})));
  append(tbs_content, asn1::encode(name(t.subject_cn)));
  append(tbs_content, asn1::encode(spki(t.key)));

  std::vector<Value> exts;
  exts.push_back(extension(oid::kBasicConstraints, true, basic_constraints(t.ca)));
  exts.push_back(extension(oid::kKeyUsage, true, asn1::encode(key_usage_value(t.key_usage_bits))));
  if (!t.san.empty()) {
    std::vector<Value> names;
    for (const auto& e : t.san) names.push_back(asn1::make_implicit(static_cast<std::uint32_t>(e.type), e.value));
    exts.push_back(extension(oid::kSubjectAltName, false, asn1::encode(asn1::make_sequence(std::move(names)))));
  }
  for (const auto& e : t.extra_extensions) exts.push_back(extension(e.oid, e.critical, e.value));
  append(tbs_content, asn1::encode(asn1::make_explicit(3, asn1::make_sequence(std::move(exts)))));

  Bytes cert_content;
  asn1::append_header(cert_content, asn1::Tag::universal(tag::kSequence, true), tbs_content.size());
  append(cert_content, tbs_content);
  append(cert_content, asn1::encode(algorithm(t.outer_signature_oid, t.signature_null_params)));
  append(cert_content, asn1::encode(asn1::make_bit_string(t.signature)));

  Bytes der;
  asn1::append_header(der, asn1::Tag::universal(tag::kSequence, true), cert_content.size());
  append(der, cert_content);
  der.resize(der.size() - std::min(t.truncate_bytes, der.size()));
  return der;
}

std::vector<GeneratedCert> generate(const DefectSpec& spec) {
  std::vector<GeneratedCert> out;
  out.reserve(spec.count);
  const KeyKind kind = key_kind_for(spec.defect);
  const GroundTruth truth = ground_truth(spec.defect);
  for (std::size_t i = 0; i < spec.count; ++i) {
    CertificateTemplate t = baseline(spec.seed, i, kind);
    apply_defect(t, spec.defect, i);
    Bytes der = build(t);
    std::string fp = sha256_hex(der);
    out.push_back({std::move(der), std::move(fp), spec.defect, truth});
  }
  return out;
}

std::string sidecar_line(const GeneratedCert& cert, std::size_t line_no) {
  auto label = [](const std::optional<ErrorCategory>& c) {
    return c ? std::string(to_string(*c)) : std::string("ACCEPT");
  };
  nlohmann::ordered_json j;
  j["fingerprint"] = cert.fingerprint;
  j["defect_id"] = std::string(to_string(cert.defect));
  j["line_no"] = line_no;
  j["expected"] = {{"lenient", label(cert.truth.lenient)}, {"strict", label(cert.truth.strict)}};
  return j.dump();
}

}  // namespace parseval::certgen
