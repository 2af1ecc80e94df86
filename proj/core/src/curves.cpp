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

#include "parseval/curves.hpp"

#include <array>

namespace parseval::x509 {

namespace {

BigInt hex(const char* digits) { return BigInt(std::string("0x") + digits); }

CurveParams make(std::string name, std::string oid, const char* p, const char* a, const char* b,
                 const char* gx, const char* gy, const char* n, std::size_t field_bytes) {
  return {std::move(name), std::move(oid), hex(p), hex(a), hex(b), hex(gx), hex(gy), hex(n), field_bytes};
}

// SEC 2 / FIPS 186-4 domain parameters.
const std::array<CurveParams, 5>& registry() {
  static const std::array<CurveParams, 5> curves = {
      make("P-224", "1.3.132.0.33",
           "ffffffffffffffffffffffffffffffff000000000000000000000001",
           "fffffffffffffffffffffffffffffffefffffffffffffffffffffffe",
           "b4050a850c04b3abf54132565044b0b7d7bfd8ba270b39432355ffb4",
           "b70e0cbd6bb4bf7f321390b94a03c1d356c21122343280d6115c1d21",
           "bd376388b5f723fb4c22dfe6cd4375a05a07476444d5819985007e34",
           "ffffffffffffffffffffffffffff16a2e0b8f03e13dd29455c5c2a3d", 28),
      make("P-256", "1.2.840.10045.3.1.7",
           "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff",
           "ffffffff00000001000000000000000000000000fffffffffffffffffffffffc",
           "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b",
           "6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296",
           "4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5",
           "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551", 32),
      make("P-384", "1.3.132.0.34",
           "fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffeffffffff0000000000000000ffffffff",
           "fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffeffffffff0000000000000000fffffffc",
           "b3312fa7e23ee7e4988e056be3f82d19181d9c6efe8141120314088f5013875ac656398d8a2ed19d2a85c8edd3ec2aef",
           "aa87ca22be8b05378eb1c71ef320ad746e1d3b628ba79b9859f741e082542a385502f25dbf55296c3a545e3872760ab7",
           "3617de4a96262c6f5d9e98bf9292dc29f8f41dbd289a147ce9da3113b5f0b8c00a60b1ce1d7e819d7a431d7c90ea0e5f",
           "ffffffffffffffffffffffffffffffffffffffffffffffffc7634d81f4372ddf581a0db248b0a77aecec196accc52973", 48),
      make("P-521", "1.3.132.0.35",
           "1ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff",
           "1fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffc",
           "0051953eb9618e1c9a1f929a21a0b68540eea2da725b99b315f3b8b489918ef109e156193951ec7e937b1652c0bd3bb1bf073573df883d2c34f1ef451fd46b503f00",
           "00c6858e06b70404e9cd9e3ecb662395b4429c648139053fb521f828af606b4d3dbaa14b5e77efe75928fe1dc127a2ffa8de3348b3c1856a429bf97e7e31c2e5bd66",
           "011839296a789a3bc0045c8a5fb42c7d1bd998f54449579b446817afbd17273e662c97ee72995ef42640c550b9013fad0761353c7086a272c24088be94769fd16650",
           "01fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffa51868783bf2f966b7fcc0148f709a5d03bb5c9b8899c47aebb6fb71e91386409", 66),
      make("secp256k1", "1.3.132.0.10",
           "fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f",
           "0",
           "7",
           "79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798",
           "483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8",
           "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141", 32),
  };
  return curves;
}

constexpr std::array<NamedCurve, 5> kAll = {NamedCurve::kP224, NamedCurve::kP256, NamedCurve::kP384,
                                            NamedCurve::kP521, NamedCurve::kSecp256k1};

}  // namespace

const CurveParams& curve_params(NamedCurve curve) { return registry()[static_cast<std::size_t>(curve)]; }

std::span<const NamedCurve> all_named_curves() { return kAll; }

std::optional<NamedCurve> curve_from_oid(std::string_view oid) {
  for (NamedCurve c : kAll) {
    if (curve_params(c).oid == oid) return c;
  }
  return std::nullopt;
}

std::string_view to_string(NamedCurve curve) { return curve_params(curve).name; }

BigInt mod(const BigInt& v, const BigInt& m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r;
}

bool is_on_curve(const CurveParams& c, const BigInt& x, const BigInt& y) {
  if (x < 0 || y < 0 || x >= c.p || y >= c.p) return false;
  const BigInt lhs = mod(y * y, c.p);
  const BigInt rhs = mod(x * x * x + c.a * x + c.b, c.p);
  return lhs == rhs;
}

bool is_nonsingular(const CurveParams& c) {
  return mod(4 * c.a * c.a * c.a + 27 * c.b * c.b, c.p) != 0;
}

}  // namespace parseval::x509
