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

#include "parseval/profile.hpp"

#include "parseval/oids.hpp"

namespace parseval::x509 {

std::set<std::string> ValidationProfile::default_sig_algs() {
  return {
      std::string(oid::kMd5WithRsa),       std::string(oid::kSha1WithRsa),
      std::string(oid::kSha224WithRsa),    std::string(oid::kSha256WithRsa),
      std::string(oid::kSha384WithRsa),    std::string(oid::kSha512WithRsa),
      std::string(oid::kRsaPss),           std::string(oid::kEcdsaWithSha1),
      std::string(oid::kEcdsaWithSha224),  std::string(oid::kEcdsaWithSha256),
      std::string(oid::kEcdsaWithSha384),  std::string(oid::kEcdsaWithSha512),
      std::string(oid::kEd25519),          std::string(oid::kDsaWithSha1),
      std::string(oid::kDsaWithSha256),
  };
}

ValidationProfile ValidationProfile::lenient() {
  ValidationProfile p;
  p.name = "lenient";
  return p;
}

ValidationProfile ValidationProfile::strict() {
  ValidationProfile p;
  p.name = "strict";
  for (bool* f : p.flags()) *f = true;
  return p;
}

std::optional<ValidationProfile> ValidationProfile::from_name(std::string_view name) {
  if (name == "strict") return strict();
  if (name == "lenient") return lenient();
  return std::nullopt;
}

std::array<bool*, ValidationProfile::kFlagCount> ValidationProfile::flags() {
  return {&check_version,          &check_extensions_require_v3, &check_sig_alg_match,
          &check_sig_alg_params_exact, &check_sig_alg_supported, &check_rsa_params,
          &check_ec_params,        &check_uri_syntax,            &check_ip_length,
          &check_duplicate_extensions, &check_validity_order,    &check_time_strict,
          &reject_unknown_critical_extension};
}

std::array<const bool*, ValidationProfile::kFlagCount> ValidationProfile::flags() const {
  auto mutable_flags = const_cast<ValidationProfile*>(this)->flags();
  std::array<const bool*, kFlagCount> out{};
  for (std::size_t i = 0; i < kFlagCount; ++i) out[i] = mutable_flags[i];
  return out;
}

std::array<std::string_view, ValidationProfile::kFlagCount> ValidationProfile::flag_names() {
  return {"check_version",          "check_extensions_require_v3", "check_sig_alg_match",
          "check_sig_alg_params_exact", "check_sig_alg_supported", "check_rsa_params",
          "check_ec_params",        "check_uri_syntax",            "check_ip_length",
          "check_duplicate_extensions", "check_validity_order",    "check_time_strict",
          "reject_unknown_critical_extension"};
}

}  // namespace parseval::x509
