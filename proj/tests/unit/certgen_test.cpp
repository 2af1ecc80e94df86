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

#include <set>

#include "json.hpp"
#include "parseval/certgen.hpp"
#include "parseval/codec.hpp"

namespace parseval::certgen {
namespace {

using x509::ValidationProfile;

std::optional<ErrorCategory> outcome(const asn1::Bytes& der, const ValidationProfile& p) {
  auto r = x509::parse_certificate(der, p);
  if (r) return std::nullopt;
  return r.error().category;
}

TEST(Certgen, DefectNamesRoundTrip) {
  EXPECT_EQ(all_defects().size(), 15u);
  for (auto d : all_defects()) EXPECT_EQ(defect_from_string(to_string(d)), d);
  EXPECT_EQ(to_string(Defect::kInvalidVersion), "invalid-version");
  EXPECT_FALSE(defect_from_string("bogus"));
}

TEST(Certgen, Presets) {
  ASSERT_EQ(presets().size(), 3u);
  auto check = [](std::string_view name, Defect d, std::size_t n) {
    auto p = preset_from_name(name);
    ASSERT_TRUE(p) << name;
    EXPECT_EQ(p->defect, d);
    EXPECT_EQ(p->count, n);
  };
  check("version-160", Defect::kInvalidVersion, 160);
  check("rsa-exponent-264", Defect::kRsaBadExponent, 264);
  check("ec-point-17", Defect::kEcBadPoint, 17);
}

// Every generated certificate gets exactly its labeled outcome.
TEST(Certgen, GroundTruthHoldsForEveryDefect) {
  const auto strict = ValidationProfile::strict();
  const auto lenient = ValidationProfile::lenient();
  for (auto d : all_defects()) {
    for (std::uint64_t seed : {1u, 2u}) {
      for (const auto& c : generate({d, 12, seed})) {
        EXPECT_EQ(c.truth, ground_truth(d));
        EXPECT_EQ(outcome(c.der, strict), c.truth.strict) << to_string(d) << " seed " << seed;
        EXPECT_EQ(outcome(c.der, lenient), c.truth.lenient) << to_string(d) << " seed " << seed;
        EXPECT_EQ(expected_for(c.truth, "strict"), c.truth.strict);
        EXPECT_EQ(expected_for(c.truth, "lenient"), c.truth.lenient);
      }
    }
  }
}

TEST(Certgen, GroundTruthTable) {
  EXPECT_EQ(ground_truth(Defect::kNone), (GroundTruth{std::nullopt, std::nullopt}));
  EXPECT_EQ(ground_truth(Defect::kTruncated),
            (GroundTruth{ErrorCategory::kAsn1ParseError, ErrorCategory::kAsn1ParseError}));
  EXPECT_EQ(ground_truth(Defect::kEcUnknownCurve).strict, ErrorCategory::kCryptoUnsupported);
  EXPECT_EQ(ground_truth(Defect::kUnknownCriticalExt).strict, ErrorCategory::kX509Unsupported);
  EXPECT_EQ(ground_truth(Defect::kBadUri).strict, ErrorCategory::kX509ParseError);
  EXPECT_EQ(key_kind_for(Defect::kEcBadPoint), KeyKind::kEc);
  EXPECT_EQ(key_kind_for(Defect::kRsaBadExponent), KeyKind::kRsa);
}

TEST(Certgen, Deterministic) {
  for (auto d : all_defects()) {
    const auto a = generate({d, 5, 42});
    const auto b = generate({d, 5, 42});
    const auto c = generate({d, 5, 43});
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].der, b[i].der) << to_string(d);
      EXPECT_NE(a[i].der, c[i].der) << to_string(d);
      EXPECT_EQ(a[i].fingerprint, sha256_hex(a[i].der));
    }
  }
}

TEST(Certgen, SerialsAndFingerprintsAreDistinct) {
  std::set<std::string> fingerprints;
  std::set<BigInt> serials;
  for (const auto& c : generate({Defect::kNone, 500, 9})) {
    fingerprints.insert(c.fingerprint);
    auto cert = x509::parse_certificate(c.der, ValidationProfile::strict());
    ASSERT_TRUE(cert);
    EXPECT_GT(cert->serial, 0);
    serials.insert(cert->serial);
  }
  EXPECT_EQ(fingerprints.size(), 500u);
  EXPECT_EQ(serials.size(), 500u);
}

// A mutant is rejected by some single-flag profile; its baseline by none.
TEST(Certgen, EachValueDefectTripsASingleCheck) {
  for (auto d : all_defects()) {
    const auto truth = ground_truth(d);
    if (truth.lenient || !truth.strict) continue;
    auto tmpl = baseline(5, 3, key_kind_for(d));
    const auto clean = build(tmpl);
    apply_defect(tmpl, d, 3);
    const auto mutant = build(tmpl);
    EXPECT_NE(clean, mutant);

    std::vector<std::string_view> tripped;
    for (std::size_t i = 0; i < ValidationProfile::kFlagCount; ++i) {
      auto p = ValidationProfile::lenient();
      *p.flags()[i] = true;
      EXPECT_FALSE(outcome(clean, p)) << to_string(d) << " baseline under " << ValidationProfile::flag_names()[i];
      if (outcome(mutant, p)) tripped.push_back(ValidationProfile::flag_names()[i]);
    }
    EXPECT_FALSE(tripped.empty()) << to_string(d);
    EXPECT_LE(tripped.size(), 2u) << to_string(d);
  }
}

TEST(Certgen, SidecarLines) {
  const auto certs = generate({Defect::kBadUri, 2, 1});
  const auto j = nlohmann::json::parse(sidecar_line(certs[1], 2));
  EXPECT_EQ(j["fingerprint"], certs[1].fingerprint);
  EXPECT_EQ(j["defect_id"], "bad-uri");
  EXPECT_EQ(j["line_no"], 2);
  EXPECT_EQ(j["expected"]["lenient"], "ACCEPT");
  EXPECT_EQ(j["expected"]["strict"], "X509_PARSE_ERROR");
}

}  // namespace
}  // namespace parseval::certgen
