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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "parseval/asn1.hpp"
#include "parseval/curves.hpp"

namespace parseval::x509 {

// Which checks the reference parser runs beyond DER decoding and structural
// mapping. Enabling a flag can only add rejections.
struct ValidationProfile {
  std::string name = "custom";

  bool check_version = false;
  bool check_extensions_require_v3 = false;
  bool check_sig_alg_match = false;
  // With check_sig_alg_match: compare parameters byte-for-byte. When off,
  // NULL and absent parameters are treated as equal.
  bool check_sig_alg_params_exact = false;
  bool check_sig_alg_supported = false;
  bool check_rsa_params = false;
  bool check_ec_params = false;
  bool check_uri_syntax = false;
  bool check_ip_length = false;
  bool check_duplicate_extensions = false;
  bool check_validity_order = false;
  bool check_time_strict = false;
  bool reject_unknown_critical_extension = false;

  // Optional extras, never part of a preset.
  bool reject_v1 = false;
  bool reject_local_domains = false;

  std::set<NamedCurve> supported_curves = {NamedCurve::kP256, NamedCurve::kP384, NamedCurve::kP521};
  std::set<std::string> supported_sig_algs = default_sig_algs();
  std::uint64_t min_rsa_exponent = 3;

  asn1::DecodeOptions der;

  static ValidationProfile lenient();
  static ValidationProfile strict();
  static std::optional<ValidationProfile> from_name(std::string_view name);
  static std::set<std::string> default_sig_algs();

  // Pointers to the catalog flags, in a fixed order.
  static constexpr std::size_t kFlagCount = 13;
  std::array<bool*, kFlagCount> flags();
  std::array<const bool*, kFlagCount> flags() const;
  static std::array<std::string_view, kFlagCount> flag_names();
};

}  // namespace parseval::x509
