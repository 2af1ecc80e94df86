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

#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "parseval/certgen.hpp"
#include "parseval/codec.hpp"
#include "parseval/x509.hpp"

namespace parseval::x509 {
namespace {

using certgen::Defect;

asn1::Bytes cert_with(Defect d, std::uint64_t seed = 11) { return certgen::generate({d, 1, seed}).front().der; }

asn1::Bytes text_bytes(std::string_view s) { return {s.begin(), s.end()}; }

TEST(X509, ParsesRsaBaseline) {
  const auto der = cert_with(Defect::kNone);
  auto cert = parse_certificate(der, ValidationProfile::strict());
  ASSERT_TRUE(cert) << cert.error().to_error_string();
  EXPECT_EQ(cert->version, 2);
  EXPECT_EQ(cert->issuer.to_string(), "CN=parseval test issuer");
  EXPECT_EQ(cert->subject.to_string(), "CN=host-0.example.com");
  using namespace std::chrono;
  EXPECT_EQ(cert->not_before, sys_days{2023y / July / 1});
  EXPECT_EQ(cert->not_after, sys_days{2024y / July / 1});
  EXPECT_EQ(cert->tbs_signature_algorithm.oid, "1.2.840.113549.1.1.11");
  EXPECT_TRUE(cert->tbs_signature_algorithm.has_null_parameters());
  EXPECT_EQ(cert->fingerprint(), sha256_hex(der));

  const auto* rsa = std::get_if<RsaPublicKey>(&cert->spki.key);
  ASSERT_NE(rsa, nullptr);
  EXPECT_EQ(rsa->exponent, 65537);
  EXPECT_EQ(boost::multiprecision::msb(rsa->modulus), 2047u);

  ASSERT_EQ(cert->extensions.size(), 3u);
  EXPECT_EQ(cert->extensions[0].oid, "2.5.29.19");
  EXPECT_TRUE(cert->extensions[0].critical);
  const auto* san = std::get_if<GeneralNames>(&*cert->extensions[2].decoded);
  ASSERT_NE(san, nullptr);
  ASSERT_EQ(san->names.size(), 3u);
  EXPECT_EQ(san->names[0].text(), "host-0.example.com");
  EXPECT_EQ(san->names[1].text(), "https://host-0.example.com/");
  EXPECT_EQ(san->names[2].text(), "192.0.2.1");
}

TEST(X509, ParsesEcBaseline) {
  auto tmpl = certgen::baseline(3, 0, certgen::KeyKind::kEc);
  auto cert = parse_certificate(certgen::build(tmpl), ValidationProfile::strict());
  ASSERT_TRUE(cert) << cert.error().to_error_string();
  const auto* ec = std::get_if<EcPublicKey>(&cert->spki.key);
  ASSERT_NE(ec, nullptr);
  EXPECT_EQ(std::get<NamedCurve>(ec->curve), NamedCurve::kP256);
  ASSERT_TRUE(ec->point);
  EXPECT_TRUE(is_on_curve(curve_params(NamedCurve::kP256), ec->point->x, ec->point->y));
}

TEST(X509, StructureErrors) {
  // Valid DER that is not a certificate.
  const asn1::Bytes not_a_cert = asn1::encode(asn1::make_sequence({asn1::make_integer(1)}));
  auto r = parse_certificate(not_a_cert, ValidationProfile::lenient());
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().category, ErrorCategory::kX509ParseError);
  EXPECT_EQ(r.error().check_id, "structure");
  EXPECT_EQ(r.error().to_error_string().rfind("structure: ", 0), 0u);
}

TEST(X509, DerErrorsCarryOffsets) {
  const auto der = cert_with(Defect::kNonMinimalLength);
  auto r = parse_certificate(der, ValidationProfile::lenient());
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().category, ErrorCategory::kAsn1ParseError);
  EXPECT_EQ(r.error().check_id, "der-non-minimal-length");
  ASSERT_TRUE(r.error().offset);
  EXPECT_LT(*r.error().offset, der.size());
}

TEST(X509, SanEdgeCases) {
  auto tmpl = certgen::baseline(1, 0, certgen::KeyKind::kRsa);
  tmpl.san = {{GeneralNameType::kIpAddress, asn1::Bytes(16, 0)}, {GeneralNameType::kDnsName, text_bytes("printer.local")}};
  const auto der = certgen::build(tmpl);
  auto cert = parse_certificate(der, ValidationProfile::strict());
  ASSERT_TRUE(cert);
  const auto& names = std::get<GeneralNames>(*cert->extensions[2].decoded).names;
  EXPECT_EQ(names[0].text(), "::");

  auto picky = ValidationProfile::strict();
  picky.reject_local_domains = true;
  auto r = parse_certificate(der, picky);
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().check_id, "san-local-domain");
  EXPECT_EQ(r.error().category, ErrorCategory::kX509ParseError);
}

TEST(X509, VersionCheck) {
  const auto strict = ValidationProfile::strict();
  const auto lenient = ValidationProfile::lenient();
  for (std::int64_t v : {0, 1, 2}) EXPECT_FALSE(check_version(v, false, strict)) << v;
  EXPECT_EQ(check_version(3, true, strict)->category, ErrorCategory::kX509ValueError);
  EXPECT_EQ(check_version(-1, true, strict)->check_id, "version");
  EXPECT_FALSE(check_version(3, true, lenient));
  EXPECT_EQ(check_version(0, true, strict)->check_id, "extensions-require-v3");

  auto v1 = strict;
  v1.reject_v1 = true;
  EXPECT_TRUE(check_version(0, false, v1));
  EXPECT_FALSE(check_version(0, false, strict));
}

TEST(X509, SignatureAlgorithmChecks) {
  const asn1::Bytes null_params = {0x05, 0x00};
  AlgorithmIdentifier with_null{"1.2.840.113549.1.1.11", null_params};
  AlgorithmIdentifier absent{"1.2.840.113549.1.1.11", std::nullopt};
  AlgorithmIdentifier sha384{"1.2.840.113549.1.1.12", null_params};

  auto p = ValidationProfile::lenient();
  EXPECT_FALSE(check_sig_alg_match(with_null, sha384, p));
  p.check_sig_alg_match = true;
  EXPECT_EQ(check_sig_alg_match(with_null, sha384, p)->check_id, "sig-alg-match");
  EXPECT_FALSE(check_sig_alg_match(with_null, absent, p));
  p.check_sig_alg_params_exact = true;
  EXPECT_TRUE(check_sig_alg_match(with_null, absent, p));

  p.check_sig_alg_supported = true;
  EXPECT_FALSE(check_sig_alg_supported(sha384, p));
  auto md2 = check_sig_alg_supported({"1.2.840.113549.1.1.2", null_params}, p);
  ASSERT_TRUE(md2);
  EXPECT_EQ(md2->category, ErrorCategory::kX509Unsupported);
}

TEST(X509, ValidityCheck) {
  using namespace std::chrono;
  const asn1::Instant a = sys_days{2023y / July / 1};
  const asn1::Instant b = sys_days{2024y / July / 1};
  EXPECT_FALSE(check_validity(a, b));
  EXPECT_FALSE(check_validity(a, a));
  EXPECT_EQ(check_validity(b, a)->check_id, "validity-order");
}

TEST(X509, RsaChecks) {
  const auto strict = ValidationProfile::strict();
  const BigInt n = (BigInt(1) << 2047) + 1;
  EXPECT_FALSE(check_rsa_key(n, 65537, strict));
  EXPECT_FALSE(check_rsa_key(n, 3, strict));
  EXPECT_EQ(check_rsa_key(n, 1, strict)->check_id, "rsa-exponent");
  EXPECT_EQ(check_rsa_key(n, 65536, strict)->check_id, "rsa-exponent");
  EXPECT_EQ(check_rsa_key(n - 1, 65537, strict)->check_id, "rsa-modulus");
  EXPECT_EQ(check_rsa_key(0, 65537, strict)->category, ErrorCategory::kCryptoValueError);
  EXPECT_FALSE(check_rsa_key(n - 1, 1, ValidationProfile::lenient()));
}

TEST(X509, ChecksRunInFixedOrder) {
  // Version and signature mismatch together: version is reported first.
  auto tmpl = certgen::baseline(2, 0, certgen::KeyKind::kRsa);
  certgen::apply_defect(tmpl, Defect::kSigAlgMismatch, 0);
  certgen::apply_defect(tmpl, Defect::kInvalidVersion, 0);
  auto r = parse_certificate(certgen::build(tmpl), ValidationProfile::strict());
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().check_id, "version");

  // Value checks come before crypto checks.
  tmpl = certgen::baseline(2, 0, certgen::KeyKind::kRsa);
  certgen::apply_defect(tmpl, Defect::kRsaBadExponent, 0);
  certgen::apply_defect(tmpl, Defect::kDuplicateExtension, 0);
  r = parse_certificate(certgen::build(tmpl), ValidationProfile::strict());
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().check_id, "duplicate-extension");
}

TEST(Profiles, PresetsAndNames) {
  const auto lenient = ValidationProfile::lenient();
  const auto strict = ValidationProfile::strict();
  for (const bool* f : lenient.flags()) EXPECT_FALSE(*f);
  for (const bool* f : strict.flags()) EXPECT_TRUE(*f);
  EXPECT_FALSE(strict.reject_v1);
  EXPECT_FALSE(strict.reject_local_domains);
  EXPECT_EQ(ValidationProfile::from_name("strict")->name, "strict");
  EXPECT_FALSE(ValidationProfile::from_name("paranoid"));
  EXPECT_EQ(ValidationProfile::flag_names().size(), ValidationProfile::kFlagCount);
}

// Turning on more flags never turns a rejection into an acceptance.
TEST(Profiles, RandomFlagSubsetsAreMonotone) {
  std::vector<asn1::Bytes> corpus;
  for (auto d : certgen::all_defects()) {
    for (auto& c : certgen::generate({d, 3, 77})) corpus.push_back(std::move(c.der));
  }
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    auto small = ValidationProfile::lenient();
    auto flags = small.flags();
    for (bool* f : flags) *f = rng() & 1;
    auto big = small;
    auto big_flags = big.flags();
    for (bool* f : big_flags) *f = *f || (rng() & 1);
    for (const auto& der : corpus) {
      if (!parse_certificate(der, small)) {
        EXPECT_FALSE(parse_certificate(der, big)) << "trial " << trial;
      }
    }
  }
}

TEST(Uri, Grammar) {
  for (auto ok : {"https://host-0.example.com/", "http://[::1]:8080/a?b#c", "urn:isbn:0451450523", "mailto:a@b.c",
                  "ldap://[v1.fe80::a+en1]/", "http://user:pw@h/%41", "s+v.1-x:", "http://192.0.2.1",
                  "file:///etc/passwd", "http://h:/"}) {
    EXPECT_TRUE(is_valid_uri(ok)) << ok;
  }
  for (auto bad : {"http://[::1", "//no-scheme", "1http://x", "", "http://h/%4", "http://h/%zz", "http://h h/",
                   "http://[::g]/", "http://h:80a/", "ht tp://x", "http://h/\x7f"}) {
    EXPECT_FALSE(is_valid_uri(bad)) << bad;
  }
  EXPECT_EQ(uri_host("https://User@Example.COM:443/x"), "Example.COM");
  EXPECT_EQ(uri_host("http://[::1]/"), "::1");
  EXPECT_FALSE(uri_host("urn:isbn:1"));
}

}  // namespace
}  // namespace parseval::x509
