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

// Strict DER decoding and canonical encoding for the ASN.1 subset used by
// X.509. Decoding is a pure function of the input buffer and the options.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "parseval/expected.hpp"

namespace parseval::asn1 {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using BigInt = boost::multiprecision::cpp_int;

enum class TagClass : std::uint8_t {
  kUniversal = 0,
  kApplication = 1,
  kContextSpecific = 2,
  kPrivate = 3,
};

struct Tag {
  TagClass cls = TagClass::kUniversal;
  bool constructed = false;
  std::uint32_t number = 0;

  static constexpr Tag universal(std::uint32_t number, bool constructed = false) {
    return {TagClass::kUniversal, constructed, number};
  }
  static constexpr Tag context(std::uint32_t number, bool constructed = false) {
    return {TagClass::kContextSpecific, constructed, number};
  }

  friend bool operator==(const Tag&, const Tag&) = default;
};

std::string to_string(const Tag& tag);

// Universal tag numbers.
namespace tag {
inline constexpr std::uint32_t kBoolean = 1;
inline constexpr std::uint32_t kInteger = 2;
inline constexpr std::uint32_t kBitString = 3;
inline constexpr std::uint32_t kOctetString = 4;
inline constexpr std::uint32_t kNull = 5;
inline constexpr std::uint32_t kOid = 6;
inline constexpr std::uint32_t kEnumerated = 10;
inline constexpr std::uint32_t kUtf8String = 12;
inline constexpr std::uint32_t kSequence = 16;
inline constexpr std::uint32_t kSet = 17;
inline constexpr std::uint32_t kNumericString = 18;
inline constexpr std::uint32_t kPrintableString = 19;
inline constexpr std::uint32_t kT61String = 20;
inline constexpr std::uint32_t kIa5String = 22;
inline constexpr std::uint32_t kUtcTime = 23;
inline constexpr std::uint32_t kGeneralizedTime = 24;
inline constexpr std::uint32_t kVisibleString = 26;
inline constexpr std::uint32_t kUniversalString = 28;
inline constexpr std::uint32_t kBmpString = 30;
}  // namespace tag

// Position of a full TLV (header and content) inside the decoded buffer.
struct ByteRange {
  std::size_t offset = 0;
  std::size_t length = 0;

  std::size_t end() const { return offset + length; }
  friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

struct Value {
  Tag tag;
  std::variant<Bytes, std::vector<Value>> content;
  // Only meaningful for decoded values.
  ByteRange span;
  std::size_t header_length = 0;

  static Value primitive(Tag tag, Bytes bytes);
  static Value constructed(Tag tag, std::vector<Value> children);

  bool is_constructed() const { return content.index() == 1; }
  bool is(std::uint32_t universal_number) const {
    return tag.cls == TagClass::kUniversal && tag.number == universal_number;
  }
  const Bytes& bytes() const { return std::get<Bytes>(content); }
  const std::vector<Value>& children() const { return std::get<std::vector<Value>>(content); }
  ByteRange content_span() const {
    return {span.offset + header_length, span.length - header_length};
  }

  // Structural equality: tag and content. Spans are ignored.
  friend bool operator==(const Value& a, const Value& b) {
    return a.tag == b.tag && a.content == b.content;
  }
};

enum class DecodeErrorKind {
  kTruncated,
  kIndefiniteLength,
  kNonMinimalLength,
  kNonMinimalInteger,
  kBadBoolean,
  kBadBitStringPadding,
  kBadOid,
  kBadTimeSyntax,
  kTrailingData,
  kNestingTooDeep,
  kBadStringCharset,
  kBadTag,
  kBadNull,
  kSetOrder,
  kInputTooLarge,
};

std::string_view to_string(DecodeErrorKind kind);

struct DecodeError {
  DecodeErrorKind kind;
  std::size_t offset = 0;

  std::string message() const;
  friend bool operator==(const DecodeError&, const DecodeError&) = default;
};

// Every rule can be relaxed individually; the defaults are full DER.
struct DecodeOptions {
  std::size_t max_input_size = std::size_t{1} << 20;
  std::size_t max_depth = 32;
  bool require_minimal_length = true;
  bool require_minimal_integer = true;
  bool require_strict_boolean = true;
  bool require_zero_bit_padding = true;
  bool require_sorted_sets = true;
  bool check_string_charsets = true;
  bool check_oids = true;
};

using DecodeResult = Expected<Value, DecodeError>;

// Decodes exactly one value that must consume the whole input.
DecodeResult decode(ByteView input, const DecodeOptions& options = {});

class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Canonical DER. SET children are emitted in ascending encoded order.
// Throws EncodeError for values whose tag disagrees with their content form.
Bytes encode(const Value& value);
void encode_to(const Value& value, Bytes& out);

// Emits identifier and length octets. `min_length_octets` > 0 forces the
// long length form with at least that many length octets (non-canonical; used
// to build mutation corpora).
void append_header(Bytes& out, Tag tag, std::size_t length, std::size_t min_length_octets = 0);

// Ordering used for DER SET OF: octet-wise comparison, shorter padded with
// trailing zero octets.
bool set_order_less(ByteView a, ByteView b);

// --- value helpers --------------------------------------------------------

Value make_boolean(bool v);
Value make_integer(const BigInt& v);
Value make_integer(std::int64_t v);
Value make_null();
Value make_octet_string(Bytes bytes);
Value make_bit_string(ByteView bytes, std::uint8_t unused_bits = 0);
Value make_oid(std::string_view dotted);  // throws EncodeError on malformed text
Value make_string(std::uint32_t universal_tag, std::string_view text);
Value make_sequence(std::vector<Value> children);
Value make_set(std::vector<Value> children);
Value make_explicit(std::uint32_t context_number, Value inner);
Value make_implicit(std::uint32_t context_number, Bytes bytes);

Bytes encode_integer_content(const BigInt& v);
BigInt integer_value(ByteView content);
std::string oid_to_string(ByteView content);
Bytes oid_content(std::string_view dotted);

struct BitStringView {
  std::uint8_t unused_bits = 0;
  ByteView bytes;
};
BitStringView bit_string(const Value& value);

// --- time -----------------------------------------------------------------

enum class TimeStrictness {
  kDer,      // "YYMMDDHHMMSSZ" / "YYYYMMDDHHMMSSZ" only
  kLenient,  // also optional seconds, zone offsets, fractional seconds
};

using Instant = std::chrono::sys_seconds;

Expected<Instant, DecodeError> parse_time(const Value& value,
                                          TimeStrictness strictness = TimeStrictness::kDer);
std::string format_instant(Instant t);  // ISO-8601, e.g. 2023-07-01T00:00:00Z

}  // namespace parseval::asn1
