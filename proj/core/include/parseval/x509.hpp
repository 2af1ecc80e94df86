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

// Reference X.509 certificate parser.
//
// parse_certificate() runs four stages in a fixed order and reports the first
// failure:
//   1. DER decoding                    -> ASN1_PARSE_ERROR
//   2. structural X.509 mapping        -> X509_PARSE_ERROR (ASN1_PARSE_ERROR for
//                                         nested DER and time syntax)
//   3. value checks                    -> X509_VALUE_ERROR, X509_UNSUPPORTED,
//                                         X509_PARSE_ERROR (names and URIs)
//   4. public key parameter checks     -> CRYPTO_VALUE_ERROR, CRYPTO_UNSUPPORTED
// Stages 3 and 4 only run the checks the profile enables. Signatures and
// trust chains are never verified.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parseval/asn1.hpp"
#include "parseval/curves.hpp"
#include "parseval/expected.hpp"
#include "parseval/profile.hpp"
#include "parseval/taxonomy.hpp"

namespace parseval::x509 {

struct AlgorithmIdentifier {
  std::string oid;
  // Full TLV of the parameters, when present.
  std::optional<asn1::Bytes> parameters;

  bool has_null_parameters() const;
  friend bool operator==(const AlgorithmIdentifier&, const AlgorithmIdentifier&) = default;
};

struct AttributeValue {
  std::string type;  // dotted OID
  asn1::Tag value_tag;
  asn1::Bytes value;
};

struct Name {
  // RDNSequence; each inner vector is one RelativeDistinguishedName.
  std::vector<std::vector<AttributeValue>> rdns;

  std::string to_string() const;
};

enum class GeneralNameType : std::uint8_t {
  kOtherName = 0,
  kRfc822Name = 1,
  kDnsName = 2,
  kX400Address = 3,
  kDirectoryName = 4,
  kEdiPartyName = 5,
  kUri = 6,
  kIpAddress = 7,
  kRegisteredId = 8,
};

struct GeneralName {
  GeneralNameType type;
  asn1::Bytes value;  // content octets of the [n] element

  std::string text() const;
};

struct GeneralNames {
  std::vector<GeneralName> names;
};

struct BasicConstraints {
  bool ca = false;
  std::optional<BigInt> path_len;
};

struct KeyUsage {
  std::uint16_t bits = 0;  // bit 0 = digitalSignature
};

using DecodedExtension = std::variant<GeneralNames, BasicConstraints, KeyUsage>;

struct Extension {
  std::string oid;
  bool critical = false;
  asn1::Bytes value;  // extnValue OCTET STRING content
  std::optional<DecodedExtension> decoded;
  std::size_t offset = 0;
};

struct RsaPublicKey {
  BigInt modulus;
  BigInt exponent;
};

struct ExplicitCurve {
  asn1::Bytes parameters;
};
struct UnknownCurve {
  std::string oid;
};
using CurveRef = std::variant<NamedCurve, ExplicitCurve, UnknownCurve>;

struct EcPoint {
  BigInt x;
  BigInt y;
};

struct EcPublicKey {
  CurveRef curve;
  asn1::Bytes encoded_point;
  // Set when the curve is known and the encoding is uncompressed with exact
  // coordinate lengths.
  std::optional<EcPoint> point;
};

struct OtherPublicKey {};

struct PublicKeyInfo {
  AlgorithmIdentifier algorithm;
  std::variant<RsaPublicKey, EcPublicKey, OtherPublicKey> key;
  asn1::Bytes subject_public_key;  // BIT STRING payload
};

struct Certificate {
  std::int64_t version = 0;  // encoded value: 0 = v1, 2 = v3
  BigInt serial;
  AlgorithmIdentifier tbs_signature_algorithm;
  AlgorithmIdentifier signature_algorithm;
  Name issuer;
  Name subject;
  asn1::Instant not_before{};
  asn1::Instant not_after{};
  PublicKeyInfo spki;
  bool has_extensions = false;
  // Input order, duplicates preserved.
  std::vector<Extension> extensions;
  asn1::Bytes signature;
  asn1::ByteRange tbs_span;
  asn1::Bytes der;

  std::string fingerprint() const;
};

using ParseResult = Expected<Certificate, CategorizedError>;

ParseResult parse_certificate(asn1::ByteView der, const ValidationProfile& profile);

// Individual checks. Each returns nullopt when the check passes.
using CheckResult = std::optional<CategorizedError>;

CheckResult check_version(std::int64_t version, bool has_extensions, const ValidationProfile& profile);
CheckResult check_sig_alg_match(const AlgorithmIdentifier& tbs_alg, const AlgorithmIdentifier& outer_alg,
                                const ValidationProfile& profile);
CheckResult check_sig_alg_supported(const AlgorithmIdentifier& alg, const ValidationProfile& profile);
CheckResult check_validity(asn1::Instant not_before, asn1::Instant not_after);
CheckResult check_extensions(const Certificate& cert, const ValidationProfile& profile);
CheckResult check_names_and_uris(const Certificate& cert, const ValidationProfile& profile);
CheckResult check_rsa_key(const BigInt& modulus, const BigInt& exponent, const ValidationProfile& profile);
CheckResult check_ec_key(const CurveRef& curve, asn1::ByteView encoded_point, const ValidationProfile& profile);
// Point validation against arbitrary domain parameters.
CheckResult check_ec_point(const CurveParams& curve, const BigInt& x, const BigInt& y);

// Generic URI grammar of RFC 3986 (scheme required).
bool is_valid_uri(std::string_view uri);
// Host part of a URI's authority, if it has one.
std::optional<std::string> uri_host(std::string_view uri);

}  // namespace parseval::x509
