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

#include <algorithm>
#include <set>

#include "parseval/oids.hpp"
#include "parseval/x509.hpp"

namespace parseval::x509 {

namespace {

CategorizedError fail(ErrorCategory category, std::string check_id, std::string message,
                      std::optional<std::size_t> offset = std::nullopt) {
  return {category, std::move(message), std::move(check_id), offset};
}

bool is_known_extension(std::string_view oid) {
  static const std::set<std::string_view> known = {
      oid::kSubjectKeyIdentifier, oid::kKeyUsage,           oid::kSubjectAltName,
      oid::kIssuerAltName,        oid::kBasicConstraints,   oid::kNameConstraints,
      oid::kCrlDistributionPoints, oid::kCertificatePolicies, oid::kPolicyMappings,
      oid::kAuthorityKeyIdentifier, oid::kPolicyConstraints, oid::kExtKeyUsage,
      oid::kInhibitAnyPolicy,     oid::kAuthorityInfoAccess, oid::kSctList,
  };
  return known.contains(oid);
}

bool is_local_domain(std::string_view host) {
  while (!host.empty() && host.back() == '.') host.remove_suffix(1);
  if (host.size() < 6) return host == "local";
  std::string tail(host.substr(host.size() - 6));
  std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
  return tail == ".local";
}

std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace

CheckResult check_version(std::int64_t version, bool has_extensions, const ValidationProfile& profile) {
  if (profile.check_version && (version < 0 || version > 2)) {
    return fail(ErrorCategory::kX509ValueError, "version", "invalid version " + std::to_string(version));
  }
  if (profile.reject_v1 && version == 0) {
    return fail(ErrorCategory::kX509ValueError, "version", "v1 certificates are not accepted");
  }
  if (profile.check_extensions_require_v3 && has_extensions && version != 2) {
    return fail(ErrorCategory::kX509ValueError, "extensions-require-v3",
                "extensions present in a version " + std::to_string(version) + " certificate");
  }
  return std::nullopt;
}

CheckResult check_sig_alg_match(const AlgorithmIdentifier& tbs_alg, const AlgorithmIdentifier& outer_alg,
                                const ValidationProfile& profile) {
  if (!profile.check_sig_alg_match) return std::nullopt;
  bool same = tbs_alg.oid == outer_alg.oid;
  if (same) {
    if (profile.check_sig_alg_params_exact) {
      same = tbs_alg.parameters == outer_alg.parameters;
    } else {
      auto normalized = [](const AlgorithmIdentifier& a) {
        return a.has_null_parameters() ? std::nullopt : a.parameters;
      };
      same = normalized(tbs_alg) == normalized(outer_alg);
    }
  }
  if (same) return std::nullopt;
  return fail(ErrorCategory::kX509ValueError, "sig-alg-match",
              "signature algorithm " + tbs_alg.oid + " in TBSCertificate does not match outer " + outer_alg.oid);
}

CheckResult check_sig_alg_supported(const AlgorithmIdentifier& alg, const ValidationProfile& profile) {
  if (!profile.check_sig_alg_supported || profile.supported_sig_algs.contains(alg.oid)) return std::nullopt;
  return fail(ErrorCategory::kX509Unsupported, "sig-alg-unsupported", "unsupported signature algorithm " + alg.oid);
}

CheckResult check_validity(asn1::Instant not_before, asn1::Instant not_after) {
  if (not_after >= not_before) return std::nullopt;
  return fail(ErrorCategory::kX509ValueError, "validity-order",
              "notAfter " + asn1::format_instant(not_after) + " is before notBefore " +
                  asn1::format_instant(not_before));
}

CheckResult check_extensions(const Certificate& cert, const ValidationProfile& profile) {
  if (profile.check_duplicate_extensions) {
    std::set<std::string_view> seen;
    for (const auto& ext : cert.extensions) {
      if (!seen.insert(ext.oid).second) {
        return fail(ErrorCategory::kX509ValueError, "duplicate-extension", "duplicate extension " + ext.oid,
                    ext.offset);
      }
    }
  }
  if (profile.reject_unknown_critical_extension) {
    for (const auto& ext : cert.extensions) {
      if (ext.critical && !is_known_extension(ext.oid)) {
        return fail(ErrorCategory::kX509Unsupported, "unknown-critical-extension",
                    "unhandled critical extension " + ext.oid, ext.offset);
      }
    }
  }
  return std::nullopt;
}

CheckResult check_names_and_uris(const Certificate& cert, const ValidationProfile& profile) {
  if (!profile.check_uri_syntax && !profile.check_ip_length && !profile.reject_local_domains) return std::nullopt;
  for (const auto& ext : cert.extensions) {
    if (!ext.decoded) continue;
    const auto* names = std::get_if<GeneralNames>(&*ext.decoded);
    if (!names) continue;
    for (const auto& gn : names->names) {
      const std::string text(gn.value.begin(), gn.value.end());
      if (gn.type == GeneralNameType::kUri) {
        if (profile.check_uri_syntax && !is_valid_uri(text)) {
          return fail(ErrorCategory::kX509ParseError, "san-uri", "cannot parse URI \"" + text + "\"", ext.offset);
        }
        if (profile.reject_local_domains) {
          if (const auto host = uri_host(text); host && is_local_domain(*host)) {
            return fail(ErrorCategory::kX509ParseError, "san-local-domain", "URI host is a local domain: " + *host,
                        ext.offset);
          }
        }
      } else if (gn.type == GeneralNameType::kDnsName) {
        if (profile.reject_local_domains && is_local_domain(text)) {
          return fail(ErrorCategory::kX509ParseError, "san-local-domain", "DNS name is a local domain: " + text,
                      ext.offset);
        }
      } else if (gn.type == GeneralNameType::kIpAddress) {
        if (profile.check_ip_length && gn.value.size() != 4 && gn.value.size() != 16) {
          return fail(ErrorCategory::kX509ParseError, "san-ip",
                      "IP address of length " + std::to_string(gn.value.size()), ext.offset);
        }
      }
    }
  }
  return std::nullopt;
}

CheckResult check_rsa_key(const BigInt& modulus, const BigInt& exponent, const ValidationProfile& profile) {
  if (!profile.check_rsa_params) return std::nullopt;
  if (modulus <= 0 || (modulus & 1) == 0) {
    return fail(ErrorCategory::kCryptoValueError, "rsa-modulus", "RSA modulus is not a positive odd number");
  }
  if (exponent < profile.min_rsa_exponent || (exponent & 1) == 0) {
    return fail(ErrorCategory::kCryptoValueError, "rsa-exponent", "invalid RSA public exponent " + to_decimal(exponent));
  }
  return std::nullopt;
}

CheckResult check_ec_key(const CurveRef& curve, asn1::ByteView encoded_point, const ValidationProfile& profile) {
  if (!profile.check_ec_params) return std::nullopt;
  const auto* named = std::get_if<NamedCurve>(&curve);
  if (!named || !profile.supported_curves.contains(*named)) {
    std::string what = "explicit curve parameters";
    if (named) what = std::string(to_string(*named));
    if (const auto* unknown = std::get_if<UnknownCurve>(&curve)) what = unknown->oid;
    return fail(ErrorCategory::kCryptoUnsupported, "ec-curve", "unsupported elliptic curve " + what);
  }
  const CurveParams& params = curve_params(*named);
  const std::size_t n = params.field_bytes;
  if (encoded_point.size() != 1 + 2 * n || encoded_point[0] != 0x04) {
    return fail(ErrorCategory::kCryptoValueError, "ec-point", "EC point is not an uncompressed point on " + params.name);
  }
  BigInt x, y;
  boost::multiprecision::import_bits(x, encoded_point.begin() + 1, encoded_point.begin() + 1 + n, 8);
  boost::multiprecision::import_bits(y, encoded_point.begin() + 1 + n, encoded_point.end(), 8);
  return check_ec_point(params, x, y);
}

CheckResult check_ec_point(const CurveParams& curve, const BigInt& x, const BigInt& y) {
  if (is_on_curve(curve, x, y)) return std::nullopt;
  return fail(ErrorCategory::kCryptoValueError, "ec-point", "EC point is not on the curve");
}

}  // namespace parseval::x509
