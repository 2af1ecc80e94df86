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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "parseval/asn1.hpp"

namespace parseval::x509 {

using BigInt = asn1::BigInt;

enum class NamedCurve { kP224, kP256, kP384, kP521, kSecp256k1 };

// Short Weierstrass curve y^2 = x^3 + ax + b over F_p.
struct CurveParams {
  std::string name;
  std::string oid;  // empty for ad-hoc curves
  BigInt p, a, b;
  BigInt gx, gy;
  BigInt order;
  std::size_t field_bytes = 0;
};

const CurveParams& curve_params(NamedCurve curve);
std::optional<NamedCurve> curve_from_oid(std::string_view oid);
std::string_view to_string(NamedCurve curve);
std::span<const NamedCurve> all_named_curves();

BigInt mod(const BigInt& v, const BigInt& m);
bool is_on_curve(const CurveParams& curve, const BigInt& x, const BigInt& y);
// 4a^3 + 27b^2 != 0 (mod p)
bool is_nonsingular(const CurveParams& curve);

}  // namespace parseval::x509
