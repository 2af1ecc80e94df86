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

#include "parseval/asn1.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace parseval::asn1 {

std::string to_string(const Tag& t) {
  static constexpr std::string_view kClass[] = {"UNIVERSAL", "APPLICATION", "CONTEXT", "PRIVATE"};
  std::ostringstream out;
  out << '[' << kClass[static_cast<int>(t.cls)] << ' ' << t.number
      << (t.constructed ? " constructed]" : "]");
  return out.str();
}

std::string_view to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::kTruncated: return "truncated";
    case DecodeErrorKind::kIndefiniteLength: return "indefinite-length";
    case DecodeErrorKind::kNonMinimalLength: return "non-minimal-length";
    case DecodeErrorKind::kNonMinimalInteger: return "non-minimal-integer";
    case DecodeErrorKind::kBadBoolean: return "bad-boolean";
    case DecodeErrorKind::kBadBitStringPadding: return "bad-bitstring-padding";
    case DecodeErrorKind::kBadOid: return "bad-oid";
    case DecodeErrorKind::kBadTimeSyntax: return "bad-time-syntax";
    case DecodeErrorKind::kTrailingData: return "trailing-data";
    case DecodeErrorKind::kNestingTooDeep: return "nesting-too-deep";
    case DecodeErrorKind::kBadStringCharset: return "bad-string-charset";
    case DecodeErrorKind::kBadTag: return "bad-tag";
    case DecodeErrorKind::kBadNull: return "bad-null";
    case DecodeErrorKind::kSetOrder: return "set-order";
    case DecodeErrorKind::kInputTooLarge: return "input-too-large";
  }
  return "unknown";
}

std::string DecodeError::message() const {
  std::ostringstream out;
  out << to_string(kind) << " at offset " << offset;
  return out.str();
}

Value Value::primitive(Tag tag, Bytes bytes) {
  tag.constructed = false;
  Value v;
  v.tag = tag;
  v.content = std::move(bytes);
  return v;
}

Value Value::constructed(Tag tag, std::vector<Value> children) {
  tag.constructed = true;
  Value v;
  v.tag = tag;
  v.content = std::move(children);
  return v;
}

// --- decoding -------------------------------------------------------------

namespace {

bool is_printable_char(std::uint8_t c) {
  if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) return true;
  switch (c) {
    case ' ': case '\'': case '(': case ')': case '+': case ',':
    case '-': case '.': case '/': case ':': case '=': case '?':
      return true;
    default:
      return false;
  }
}

bool is_valid_utf8(ByteView s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const std::uint8_t c = s[i];
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

bool check_charset(std::uint32_t number, ByteView s) {
  switch (number) {
    case tag::kPrintableString:
      return std::all_of(s.begin(), s.end(), is_printable_char);
    case tag::kIa5String:
      return std::all_of(s.begin(), s.end(), [](std::uint8_t c) { return c < 0x80; });
    case tag::kVisibleString:
      return std::all_of(s.begin(), s.end(), [](std::uint8_t c) { return c >= 0x20 && c <= 0x7E; });
    case tag::kNumericString:
      return std::all_of(s.begin(), s.end(), [](std::uint8_t c) { return c == ' ' || (c >= '0' && c <= '9'); });
    case tag::kUtf8String:
      return is_valid_utf8(s);
    case tag::kBmpString:
      return s.size() % 2 == 0;
    case tag::kUniversalString:
      return s.size() % 4 == 0;
    default:
      return true;  // T61String and friends carry arbitrary octets
  }
}

// Universal types DER requires to use the primitive form.
bool must_be_primitive(std::uint32_t number) {
  switch (number) {
    case tag::kBoolean: case tag::kInteger: case tag::kBitString: case tag::kOctetString:
    case tag::kNull: case tag::kOid: case tag::kEnumerated: case tag::kUtf8String:
    case tag::kNumericString: case tag::kPrintableString: case tag::kT61String:
    case tag::kIa5String: case tag::kUtcTime: case tag::kGeneralizedTime:
    case tag::kVisibleString: case tag::kUniversalString: case tag::kBmpString:
      return true;
    default:
      return false;
  }
}

class Decoder {
 public:
  Decoder(ByteView input, const DecodeOptions& options) : in_(input), opt_(options) {}

  Expected<Value, DecodeError> run() {
    if (in_.empty()) return fail(DecodeErrorKind::kTruncated, 0);
    if (in_.size() > opt_.max_input_size) return fail(DecodeErrorKind::kInputTooLarge, opt_.max_input_size);
    Value root;
    std::size_t pos = 0;
    if (auto err = read_value(pos, in_.size(), 1, root)) return unexpected(*err);
    if (pos != in_.size()) return fail(DecodeErrorKind::kTrailingData, pos);
    return root;
  }

 private:
  using MaybeError = std::optional<DecodeError>;

  static Unexpected<DecodeError> fail(DecodeErrorKind kind, std::size_t offset) {
    return unexpected(DecodeError{kind, offset});
  }
  static MaybeError err(DecodeErrorKind kind, std::size_t offset) { return DecodeError{kind, offset}; }

  MaybeError read_value(std::size_t& pos, std::size_t end, std::size_t depth, Value& out) {
    if (depth > opt_.max_depth) return err(DecodeErrorKind::kNestingTooDeep, pos);
    const std::size_t start = pos;
    if (pos >= end) return err(DecodeErrorKind::kTruncated, pos);

    const std::uint8_t id = in_[pos++];
    Tag t{static_cast<TagClass>(id >> 6), (id & 0x20) != 0, static_cast<std::uint32_t>(id & 0x1F)};
    if (t.number == 0x1F) {
      std::uint32_t number = 0;
      bool first = true;
      for (;;) {
        if (pos >= end) return err(DecodeErrorKind::kTruncated, pos);
        const std::uint8_t b = in_[pos++];
        if (first && b == 0x80) return err(DecodeErrorKind::kBadTag, start);
        first = false;
        if (number > (0xFFFFFFFFu >> 7)) return err(DecodeErrorKind::kBadTag, start);
        number = (number << 7) | (b & 0x7F);
        if ((b & 0x80) == 0) break;
      }
      if (number < 0x1F) return err(DecodeErrorKind::kBadTag, start);
      t.number = number;
    }

    if (pos >= end) return err(DecodeErrorKind::kTruncated, pos);
    const std::size_t length_pos = pos;
    const std::uint8_t l0 = in_[pos++];
    std::size_t length = 0;
    if (l0 < 0x80) {
      length = l0;
    } else if (l0 == 0x80) {
      return err(DecodeErrorKind::kIndefiniteLength, length_pos);
    } else {
      const std::size_t n = l0 & 0x7F;
      if (end - pos < n) return err(DecodeErrorKind::kTruncated, end);
      if (opt_.require_minimal_length && in_[pos] == 0) return err(DecodeErrorKind::kNonMinimalLength, length_pos);
      std::size_t skipped = 0;
      while (skipped < n && in_[pos + skipped] == 0) ++skipped;
      if (n - skipped > sizeof(std::uint32_t)) {
        // Longer than any input we accept.
        return err(DecodeErrorKind::kTruncated, length_pos);
      }
      for (std::size_t k = 0; k < n; ++k) length = (length << 8) | in_[pos + k];
      pos += n;
      if (opt_.require_minimal_length && length < 0x80) return err(DecodeErrorKind::kNonMinimalLength, length_pos);
    }
    if (end - pos < length) return err(DecodeErrorKind::kTruncated, start);

    const std::size_t header_length = pos - start;
    const std::size_t content_end = pos + length;

    if (t.cls == TagClass::kUniversal) {
      if (t.number == 0) return err(DecodeErrorKind::kBadTag, start);
      if (t.constructed && must_be_primitive(t.number)) return err(DecodeErrorKind::kBadTag, start);
      if (!t.constructed && (t.number == tag::kSequence || t.number == tag::kSet)) {
        return err(DecodeErrorKind::kBadTag, start);
      }
    }

    out.tag = t;
    out.span = {start, header_length + length};
    out.header_length = header_length;

    if (t.constructed) {
      std::vector<Value> children;
      while (pos < content_end) {
        Value child;
        if (auto e = read_value(pos, content_end, depth + 1, child)) return e;
        children.push_back(std::move(child));
      }
      if (opt_.require_sorted_sets && t.cls == TagClass::kUniversal && t.number == tag::kSet) {
        for (std::size_t i = 1; i < children.size(); ++i) {
          const auto& prev = children[i - 1].span;
          const auto& cur = children[i].span;
          if (set_order_less(in_.subspan(cur.offset, cur.length), in_.subspan(prev.offset, prev.length))) {
            return err(DecodeErrorKind::kSetOrder, cur.offset);
          }
        }
      }
      out.content = std::move(children);
    } else {
      ByteView content = in_.subspan(pos, length);
      if (t.cls == TagClass::kUniversal) {
        if (auto e = check_primitive(t.number, content, start)) return e;
      }
      out.content = Bytes(content.begin(), content.end());
      pos = content_end;
    }
    return std::nullopt;
  }

  MaybeError check_primitive(std::uint32_t number, ByteView c, std::size_t offset) const {
    switch (number) {
      case tag::kBoolean:
        if (c.size() != 1) return err(DecodeErrorKind::kBadBoolean, offset);
        if (opt_.require_strict_boolean && c[0] != 0x00 && c[0] != 0xFF) {
          return err(DecodeErrorKind::kBadBoolean, offset);
        }
        return std::nullopt;
      case tag::kInteger:
      case tag::kEnumerated:
        if (c.empty()) return err(DecodeErrorKind::kNonMinimalInteger, offset);
        if (opt_.require_minimal_integer && c.size() > 1 &&
            ((c[0] == 0x00 && (c[1] & 0x80) == 0) || (c[0] == 0xFF && (c[1] & 0x80) != 0))) {
          return err(DecodeErrorKind::kNonMinimalInteger, offset);
        }
        return std::nullopt;
      case tag::kBitString: {
        if (c.empty() || c[0] > 7 || (c.size() == 1 && c[0] != 0)) {
          return err(DecodeErrorKind::kBadBitStringPadding, offset);
        }
        const std::uint8_t mask = static_cast<std::uint8_t>((1u << c[0]) - 1);
        if (opt_.require_zero_bit_padding && (c.back() & mask) != 0) {
          return err(DecodeErrorKind::kBadBitStringPadding, offset);
        }
        return std::nullopt;
      }
      case tag::kNull:
        if (!c.empty()) return err(DecodeErrorKind::kBadNull, offset);
        return std::nullopt;
      case tag::kOid:
        if (!opt_.check_oids) return std::nullopt;
        if (c.empty() || (c.back() & 0x80) != 0) return err(DecodeErrorKind::kBadOid, offset);
        for (std::size_t i = 0; i < c.size(); ++i) {
          const bool starts_subid = i == 0 || (c[i - 1] & 0x80) == 0;
          if (starts_subid && c[i] == 0x80) return err(DecodeErrorKind::kBadOid, offset);
        }
        return std::nullopt;
      default:
        if (opt_.check_string_charsets && !check_charset(number, c)) {
          return err(DecodeErrorKind::kBadStringCharset, offset);
        }
        return std::nullopt;
    }
  }

  ByteView in_;
  const DecodeOptions& opt_;
};

}  // namespace

DecodeResult decode(ByteView input, const DecodeOptions& options) {
  return Decoder(input, options).run();
}

// --- encoding -------------------------------------------------------------

bool set_order_less(ByteView a, ByteView b) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t x = i < a.size() ? a[i] : 0;
    const std::uint8_t y = i < b.size() ? b[i] : 0;
    if (x != y) return x < y;
  }
  return false;
}

void append_header(Bytes& out, Tag tag, std::size_t length, std::size_t min_length_octets) {
  const std::uint8_t cls_bits = static_cast<std::uint8_t>(static_cast<std::uint8_t>(tag.cls) << 6);
  const std::uint8_t cons_bit = tag.constructed ? 0x20 : 0x00;
  if (tag.number < 0x1F) {
    out.push_back(static_cast<std::uint8_t>(cls_bits | cons_bit | tag.number));
  } else {
    out.push_back(static_cast<std::uint8_t>(cls_bits | cons_bit | 0x1F));
    std::uint8_t groups[5];
    int n = 0;
    std::uint32_t v = tag.number;
    do {
      groups[n++] = static_cast<std::uint8_t>(v & 0x7F);
      v >>= 7;
    } while (v != 0);
    while (n-- > 0) out.push_back(static_cast<std::uint8_t>(groups[n] | (n > 0 ? 0x80 : 0x00)));
  }

  if (length < 0x80 && min_length_octets == 0) {
    out.push_back(static_cast<std::uint8_t>(length));
    return;
  }
  std::size_t octets = 0;
  for (std::size_t v = length; v != 0; v >>= 8) ++octets;
  octets = std::max({octets, min_length_octets, std::size_t{1}});
  if (octets > 126) throw EncodeError("length field too large");
  out.push_back(static_cast<std::uint8_t>(0x80 | octets));
  for (std::size_t i = octets; i-- > 0;) {
    out.push_back(i >= sizeof(std::size_t) ? 0 : static_cast<std::uint8_t>(length >> (8 * i)));
  }
}

void encode_to(const Value& value, Bytes& out) {
  if (value.tag.constructed != value.is_constructed()) {
    throw EncodeError("tag " + to_string(value.tag) + " does not match content form");
  }
  if (!value.is_constructed()) {
    const Bytes& b = value.bytes();
    append_header(out, value.tag, b.size());
    out.insert(out.end(), b.begin(), b.end());
    return;
  }
  std::vector<Bytes> parts;
  parts.reserve(value.children().size());
  for (const Value& child : value.children()) parts.push_back(encode(child));
  if (value.is(tag::kSet)) {
    std::stable_sort(parts.begin(), parts.end(),
                     [](const Bytes& a, const Bytes& b) { return set_order_less(a, b); });
  }
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  append_header(out, value.tag, total);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
}

Bytes encode(const Value& value) {
  Bytes out;
  encode_to(value, out);
  return out;
}

// --- helpers --------------------------------------------------------------

Bytes encode_integer_content(const BigInt& v) {
  Bytes out;
  if (v >= 0) {
    boost::multiprecision::export_bits(v, std::back_inserter(out), 8);
    if (out.empty()) out.push_back(0);
    if (out.front() & 0x80) out.insert(out.begin(), 0x00);
    return out;
  }
  // Two's complement of a negative value: encode (2^(8k) + v) for the
  // smallest k whose sign bit is set.
  BigInt magnitude = -v;
  std::size_t k = 1;
  while ((BigInt(1) << (8 * k - 1)) < magnitude) ++k;
  const BigInt twos = (BigInt(1) << (8 * k)) + v;
  boost::multiprecision::export_bits(twos, std::back_inserter(out), 8);
  while (out.size() < k) out.insert(out.begin(), 0x00);
  return out;
}

BigInt integer_value(ByteView content) {
  BigInt v;
  if (content.empty()) return v;
  boost::multiprecision::import_bits(v, content.begin(), content.end(), 8);
  if (content[0] & 0x80) v -= BigInt(1) << (8 * content.size());
  return v;
}

Bytes oid_content(std::string_view dotted) {
  std::vector<std::uint64_t> arcs;
  std::size_t i = 0;
  while (i <= dotted.size()) {
    const std::size_t dot = std::min(dotted.find('.', i), dotted.size());
    const std::string_view part = dotted.substr(i, dot - i);
    std::uint64_t arc = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), arc);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw EncodeError("malformed OID text: " + std::string(dotted));
    }
    arcs.push_back(arc);
    i = dot + 1;
  }
  if (arcs.size() < 2 || arcs[0] > 2 || (arcs[0] < 2 && arcs[1] >= 40)) {
    throw EncodeError("malformed OID text: " + std::string(dotted));
  }
  Bytes out;
  auto push_base128 = [&out](std::uint64_t v) {
    std::uint8_t groups[10];
    int n = 0;
    do {
      groups[n++] = static_cast<std::uint8_t>(v & 0x7F);
      v >>= 7;
    } while (v != 0);
    while (n-- > 0) out.push_back(static_cast<std::uint8_t>(groups[n] | (n > 0 ? 0x80 : 0x00)));
  };
  push_base128(arcs[0] * 40 + arcs[1]);
  for (std::size_t k = 2; k < arcs.size(); ++k) push_base128(arcs[k]);
  return out;
}

std::string oid_to_string(ByteView content) {
  std::string out;
  std::uint64_t v = 0;
  bool first = true;
  for (std::uint8_t b : content) {
    v = (v << 7) | (b & 0x7F);
    if (b & 0x80) continue;
    if (first) {
      const std::uint64_t top = v < 40 ? 0 : (v < 80 ? 1 : 2);
      out += std::to_string(top) + '.' + std::to_string(v - 40 * top);
      first = false;
    } else {
      out += '.' + std::to_string(v);
    }
    v = 0;
  }
  return out;
}

BitStringView bit_string(const Value& value) {
  const Bytes& b = value.bytes();
  if (b.empty()) return {};
  return {b[0], ByteView(b).subspan(1)};
}

Value make_boolean(bool v) {
  return Value::primitive(Tag::universal(tag::kBoolean), {static_cast<std::uint8_t>(v ? 0xFF : 0x00)});
}

Value make_integer(const BigInt& v) {
  return Value::primitive(Tag::universal(tag::kInteger), encode_integer_content(v));
}

Value make_integer(std::int64_t v) { return make_integer(BigInt(v)); }

Value make_null() { return Value::primitive(Tag::universal(tag::kNull), {}); }

Value make_octet_string(Bytes bytes) {
  return Value::primitive(Tag::universal(tag::kOctetString), std::move(bytes));
}

Value make_bit_string(ByteView bytes, std::uint8_t unused_bits) {
  Bytes content;
  content.reserve(bytes.size() + 1);
  content.push_back(unused_bits);
  content.insert(content.end(), bytes.begin(), bytes.end());
  return Value::primitive(Tag::universal(tag::kBitString), std::move(content));
}

Value make_oid(std::string_view dotted) {
  return Value::primitive(Tag::universal(tag::kOid), oid_content(dotted));
}

Value make_string(std::uint32_t universal_tag, std::string_view text) {
  return Value::primitive(Tag::universal(universal_tag), Bytes(text.begin(), text.end()));
}

Value make_sequence(std::vector<Value> children) {
  return Value::constructed(Tag::universal(tag::kSequence, true), std::move(children));
}

Value make_set(std::vector<Value> children) {
  return Value::constructed(Tag::universal(tag::kSet, true), std::move(children));
}

Value make_explicit(std::uint32_t context_number, Value inner) {
  std::vector<Value> children;
  children.push_back(std::move(inner));
  return Value::constructed(Tag::context(context_number, true), std::move(children));
}

Value make_implicit(std::uint32_t context_number, Bytes bytes) {
  return Value::primitive(Tag::context(context_number), std::move(bytes));
}

}  // namespace parseval::asn1
