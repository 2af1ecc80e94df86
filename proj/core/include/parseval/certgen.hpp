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

// Synthetic certificates: a valid baseline per (seed, index) and single-defect
// mutants of it, each labeled with the outcome the built-in profiles must
// produce. Signatures are random bytes and never verifiable.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "parseval/asn1.hpp"
#include "parseval/taxonomy.hpp"
#include "parseval/x509.hpp"

namespace parseval::certgen {

using asn1::BigInt;

enum class Defect {
  kNone,
  kInvalidVersion,
  kRsaBadExponent,
  kRsaEvenModulus,
  kEcBadPoint,
  kEcUnknownCurve,
  kBadUtcTime,
  kBadUri,
  kBadIpLength,
  kDuplicateExtension,
  kSigAlgMismatch,
  kValidityReversed,
  kUnknownCriticalExt,
  kTruncated,
  kNonMinimalLength,
};

std::span<const Defect> all_defects();
std::string_view to_string(Defect defect);
std::optional<Defect> defect_from_string(std::string_view id);

struct DefectSpec {
  Defect defect = Defect::kNone;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

// Named corpus sizes mirroring the published per-check rejection counts.
struct Preset {
  std::string_view name;
  Defect defect;
  std::size_t count;
};
std::span<const Preset> presets();
std::optional<Preset> preset_from_name(std::string_view name);

// nullopt means the profile accepts the certificate.
struct GroundTruth {
  std::optional<ErrorCategory> lenient;
  std::optional<ErrorCategory> strict;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

GroundTruth ground_truth(Defect defect);
// Expected outcome for a built-in profile name ("lenient" or "strict").
std::optional<ErrorCategory> expected_for(const GroundTruth& truth, std::string_view profile_name);

enum class KeyKind { kRsa, kEc };
// Key family of the baseline a defect is applied to.
KeyKind key_kind_for(Defect defect);

struct RsaKeySpec {
  BigInt modulus;
  BigInt exponent;
};

struct EcKeySpec {
  std::string curve_oid;
  asn1::Bytes point;  // SEC1 encoding
};

struct ExtensionSpec {
  std::string oid;
  bool critical = false;
  asn1::Bytes value;  // extnValue content
};

struct SanEntry {
  x509::GeneralNameType type;
  asn1::Bytes value;
};

// Everything build() needs. Mutations edit a template in place.
struct CertificateTemplate {
  std::optional<std::int64_t> version = 2;  // nullopt omits the field
  BigInt serial;
  std::string tbs_signature_oid;
  std::string outer_signature_oid;
  bool signature_null_params = true;
  std::string issuer_cn;
  std::string subject_cn;
  std::string not_before;  // UTCTime text
  std::string not_after;
  std::variant<RsaKeySpec, EcKeySpec> key;
  bool ca = false;
  std::uint16_t key_usage_bits = 0x01;  // digitalSignature
  std::vector<SanEntry> san;
  // Appended after basicConstraints, keyUsage, subjectAltName.
  std::vector<ExtensionSpec> extra_extensions;
  asn1::Bytes signature;

  // Encoding tweaks applied by build().
  std::size_t serial_length_octets = 0;  // > 0 forces a long-form length
  std::size_t truncate_bytes = 0;
};

CertificateTemplate baseline(std::uint64_t seed, std::size_t index, KeyKind kind);
void apply_defect(CertificateTemplate& tmpl, Defect defect, std::size_t index);
asn1::Bytes build(const CertificateTemplate& tmpl);

struct GeneratedCert {
  asn1::Bytes der;
  std::string fingerprint;
  Defect defect;
  GroundTruth truth;
};

std::vector<GeneratedCert> generate(const DefectSpec& spec);

// One JSON object per line: fingerprint, defect_id, line_no, expected.
std::string sidecar_line(const GeneratedCert& cert, std::size_t line_no);

}  // namespace parseval::certgen
