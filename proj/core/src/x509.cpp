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

#include "parseval/x509.hpp"

#include <arpa/inet.h>

#include <limits>

#include "parseval/codec.hpp"
#include "parseval/oids.hpp"

namespace parseval::x509 {

using asn1::ByteView;
using asn1::Bytes;
using asn1::Value;
namespace tag = asn1::tag;

bool AlgorithmIdentifier::has_null_parameters() const {
  return parameters && *parameters == Bytes{0x05, 0x00};
}

std::string Name::to_string() const {
  std::string out;
  for (const auto& rdn : rdns) {
    for (const auto& atv : rdn) {
      if (!out.empty()) out += ", ";
      if (atv.type == oid::kCommonName) out += "CN";
      else if (atv.type == oid::kOrganizationName) out += "O";
      else if (atv.type == oid::kCountryName) out += "C";
      else out += atv.type;
      out += '=';
      out.append(atv.value.begin(), atv.value.end());
    }
  }
  return out;
}

std::string GeneralName::text() const {
  switch (type) {
    case GeneralNameType::kRfc822Name:
    case GeneralNameType::kDnsName:
    case GeneralNameType::kUri:
      return std::string(value.begin(), value.end());
    case GeneralNameType::kIpAddress: {
      char buf[INET6_ADDRSTRLEN] = {};
      if (value.size() == 4 && inet_ntop(AF_INET, value.data(), buf, sizeof buf)) return buf;
      if (value.size() == 16 && inet_ntop(AF_INET6, value.data(), buf, sizeof buf)) return buf;
      return "ip:" + hex_encode(value);
    }
    default:
      return hex_encode(value);
  }
}

std::string Certificate::fingerprint() const { return sha256_hex(der); }

namespace {

CategorizedError structure_error(std::string message, std::size_t offset) {
  return {ErrorCategory::kX509ParseError, std::move(message), "structure", offset};
}

CategorizedError der_error(const asn1::DecodeError& e, std::size_t base = 0) {
  return {ErrorCategory::kAsn1ParseError, "DER " + std::string(asn1::to_string(e.kind)),
          "der-" + std::string(asn1::to_string(e.kind)), base + e.offset};
}

bool is_context(const Value& v, std::uint32_t number) {
  return v.tag.cls == asn1::TagClass::kContextSpecific && v.tag.number == number;
}

// Walks the children of a constructed value.
class Reader {
 public:
  explicit Reader(const Value& parent) : items_(parent.children()), end_offset_(parent.span.end()) {}

  const Value* peek() const { return i_ < items_.size() ? &items_[i_] : nullptr; }
  const Value* next() { return i_ < items_.size() ? &items_[i_++] : nullptr; }
  bool at_end() const { return i_ == items_.size(); }
  std::size_t offset() const { return i_ < items_.size() ? items_[i_].span.offset : end_offset_; }

 private:
  const std::vector<Value>& items_;
  std::size_t i_ = 0;
  std::size_t end_offset_;
};

using MaybeError = std::optional<CategorizedError>;

class Mapper {
 public:
  Mapper(ByteView der, const ValidationProfile& profile) : der_(der), profile_(profile) {}

  MaybeError map(const Value& root, Certificate& cert) {
    if (!root.is(tag::kSequence) || root.children().size() != 3) {
      return structure_error("Certificate is not a SEQUENCE of three elements", root.span.offset);
    }
    const Value& tbs = root.children()[0];
    if (auto e = map_algorithm(root.children()[1], cert.signature_algorithm)) return e;
    const Value& sig = root.children()[2];
    if (!sig.is(tag::kBitString)) return structure_error("signatureValue is not a BIT STRING", sig.span.offset);
    const auto bits = asn1::bit_string(sig);
    cert.signature.assign(bits.bytes.begin(), bits.bytes.end());
    cert.tbs_span = tbs.span;
    return map_tbs(tbs, cert);
  }

 private:
  Bytes raw(const Value& v) const {
    const auto s = der_.subspan(v.span.offset, v.span.length);
    return Bytes(s.begin(), s.end());
  }

  MaybeError map_algorithm(const Value& v, AlgorithmIdentifier& out) {
    if (!v.is(tag::kSequence) || v.children().empty() || v.children().size() > 2 ||
        !v.children()[0].is(tag::kOid)) {
      return structure_error("malformed AlgorithmIdentifier", v.span.offset);
    }
    out.oid = asn1::oid_to_string(v.children()[0].bytes());
    if (v.children().size() == 2) out.parameters = raw(v.children()[1]);
    return std::nullopt;
  }

  MaybeError map_name(const Value& v, Name& out) {
    if (!v.is(tag::kSequence)) return structure_error("Name is not a SEQUENCE", v.span.offset);
    for (const Value& rdn : v.children()) {
      if (!rdn.is(tag::kSet) || rdn.children().empty()) {
        return structure_error("RelativeDistinguishedName is not a non-empty SET", rdn.span.offset);
      }
      std::vector<AttributeValue> attrs;
      for (const Value& atv : rdn.children()) {
        if (!atv.is(tag::kSequence) || atv.children().size() != 2 || !atv.children()[0].is(tag::kOid)) {
          return structure_error("malformed AttributeTypeAndValue", atv.span.offset);
        }
        const Value& val = atv.children()[1];
        attrs.push_back({asn1::oid_to_string(atv.children()[0].bytes()), val.tag,
                         val.is_constructed() ? raw(val) : val.bytes()});
      }
      out.rdns.push_back(std::move(attrs));
    }
    return std::nullopt;
  }

  MaybeError map_time(const Value& v, asn1::Instant& out) {
    const auto strictness = profile_.check_time_strict ? asn1::TimeStrictness::kDer : asn1::TimeStrictness::kLenient;
    auto t = asn1::parse_time(v, strictness);
    if (!t) return der_error(t.error());
    out = *t;
    return std::nullopt;
  }

  MaybeError map_tbs(const Value& tbs, Certificate& cert) {
    if (!tbs.is(tag::kSequence)) return structure_error("TBSCertificate is not a SEQUENCE", tbs.span.offset);
    Reader r(tbs);

    if (const Value* v = r.peek(); v && is_context(*v, 0) && v->tag.constructed) {
      r.next();
      if (v->children().size() != 1 || !v->children()[0].is(tag::kInteger)) {
        return structure_error("malformed version", v->span.offset);
      }
      const BigInt version = asn1::integer_value(v->children()[0].bytes());
      if (version > std::numeric_limits<std::int64_t>::max() || version < std::numeric_limits<std::int64_t>::min()) {
        return structure_error("version out of range", v->span.offset);
      }
      cert.version = static_cast<std::int64_t>(version);
    }

    const Value* serial = r.next();
    if (!serial || !serial->is(tag::kInteger)) return structure_error("missing serialNumber", r.offset());
    cert.serial = asn1::integer_value(serial->bytes());

    const Value* sig_alg = r.next();
    if (!sig_alg) return structure_error("missing signature", r.offset());
    if (auto e = map_algorithm(*sig_alg, cert.tbs_signature_algorithm)) return e;

    const Value* issuer = r.next();
    if (!issuer) return structure_error("missing issuer", r.offset());
    if (auto e = map_name(*issuer, cert.issuer)) return e;

    const Value* validity = r.next();
    if (!validity || !validity->is(tag::kSequence) || validity->children().size() != 2) {
      return structure_error("malformed validity", validity ? validity->span.offset : r.offset());
    }
    if (auto e = map_time(validity->children()[0], cert.not_before)) return e;
    if (auto e = map_time(validity->children()[1], cert.not_after)) return e;

    const Value* subject = r.next();
    if (!subject) return structure_error("missing subject", r.offset());
    if (auto e = map_name(*subject, cert.subject)) return e;

    const Value* spki = r.next();
    if (!spki) return structure_error("missing subjectPublicKeyInfo", r.offset());
    if (auto e = map_spki(*spki, cert.spki)) return e;

    if (const Value* v = r.peek(); v && is_context(*v, 1) && !v->tag.constructed) r.next();
    if (const Value* v = r.peek(); v && is_context(*v, 2) && !v->tag.constructed) r.next();
    if (const Value* v = r.peek(); v && is_context(*v, 3) && v->tag.constructed) {
      r.next();
      if (v->children().size() != 1 || !v->children()[0].is(tag::kSequence)) {
        return structure_error("malformed extensions", v->span.offset);
      }
      cert.has_extensions = true;
      for (const Value& ext : v->children()[0].children()) {
        if (auto e = map_extension(ext, cert.extensions)) return e;
      }
    }
    if (!r.at_end()) return structure_error("unexpected element in TBSCertificate", r.offset());
    return std::nullopt;
  }

  MaybeError map_spki(const Value& v, PublicKeyInfo& out) {
    if (!v.is(tag::kSequence) || v.children().size() != 2) {
      return structure_error("malformed SubjectPublicKeyInfo", v.span.offset);
    }
    if (auto e = map_algorithm(v.children()[0], out.algorithm)) return e;
    const Value& key = v.children()[1];
    if (!key.is(tag::kBitString)) return structure_error("subjectPublicKey is not a BIT STRING", key.span.offset);
    const auto bits = asn1::bit_string(key);
    out.subject_public_key.assign(bits.bytes.begin(), bits.bytes.end());
    const std::size_t payload_offset = key.span.offset + key.header_length + 1;

    if (out.algorithm.oid == oid::kRsaEncryption) {
      if (bits.unused_bits != 0) return structure_error("RSA key BIT STRING has unused bits", key.span.offset);
      auto decoded = asn1::decode(bits.bytes, profile_.der);
      if (!decoded) return der_error(decoded.error(), payload_offset);
      const Value& seq = *decoded;
      if (!seq.is(tag::kSequence) || seq.children().size() != 2 || !seq.children()[0].is(tag::kInteger) ||
          !seq.children()[1].is(tag::kInteger)) {
        return structure_error("malformed RSAPublicKey", payload_offset);
      }
      out.key = RsaPublicKey{asn1::integer_value(seq.children()[0].bytes()),
                             asn1::integer_value(seq.children()[1].bytes())};
      return std::nullopt;
    }

    if (out.algorithm.oid == oid::kEcPublicKey) {
      if (!out.algorithm.parameters) return structure_error("EC key without curve parameters", v.span.offset);
      const Value& params = v.children()[0].children()[1];
      EcPublicKey ec;
      if (params.is(tag::kOid)) {
        const std::string curve_oid = asn1::oid_to_string(params.bytes());
        if (auto named = curve_from_oid(curve_oid)) ec.curve = *named;
        else ec.curve = UnknownCurve{curve_oid};
      } else if (params.is(tag::kSequence)) {
        ec.curve = ExplicitCurve{raw(params)};
      } else {
        return structure_error("EC parameters are neither a named curve nor explicit", params.span.offset);
      }
      ec.encoded_point = out.subject_public_key;
      if (const auto* named = std::get_if<NamedCurve>(&ec.curve)) {
        const std::size_t n = curve_params(*named).field_bytes;
        const Bytes& pt = ec.encoded_point;
        if (pt.size() == 1 + 2 * n && pt[0] == 0x04) {
          EcPoint p;
          boost::multiprecision::import_bits(p.x, pt.begin() + 1, pt.begin() + 1 + n, 8);
          boost::multiprecision::import_bits(p.y, pt.begin() + 1 + n, pt.end(), 8);
          ec.point = std::move(p);
        }
      }
      out.key = std::move(ec);
      return std::nullopt;
    }

    out.key = OtherPublicKey{};
    return std::nullopt;
  }

  MaybeError map_extension(const Value& v, std::vector<Extension>& out) {
    if (!v.is(tag::kSequence) || v.children().size() < 2 || v.children().size() > 3 ||
        !v.children()[0].is(tag::kOid)) {
      return structure_error("malformed Extension", v.span.offset);
    }
    Extension ext;
    ext.offset = v.span.offset;
    ext.oid = asn1::oid_to_string(v.children()[0].bytes());
    const Value* value = &v.children()[1];
    if (v.children().size() == 3) {
      if (!value->is(tag::kBoolean)) return structure_error("Extension critical is not a BOOLEAN", value->span.offset);
      ext.critical = value->bytes()[0] != 0;
      value = &v.children()[2];
    }
    if (!value->is(tag::kOctetString)) return structure_error("extnValue is not an OCTET STRING", value->span.offset);
    ext.value = value->bytes();
    const std::size_t base = value->span.offset + value->header_length;

    if (ext.oid == oid::kSubjectAltName || ext.oid == oid::kIssuerAltName) {
      auto decoded = asn1::decode(ext.value, profile_.der);
      if (!decoded) return der_error(decoded.error(), base);
      GeneralNames names;
      if (auto e = map_general_names(*decoded, ext.value, base, names)) return e;
      ext.decoded = std::move(names);
    } else if (ext.oid == oid::kBasicConstraints) {
      auto decoded = asn1::decode(ext.value, profile_.der);
      if (!decoded) return der_error(decoded.error(), base);
      BasicConstraints bc;
      if (!decoded->is(tag::kSequence) || decoded->children().size() > 2) {
        return structure_error("malformed BasicConstraints", base);
      }
      Reader r(*decoded);
      if (const Value* ca = r.peek(); ca && ca->is(tag::kBoolean)) {
        bc.ca = ca->bytes()[0] != 0;
        r.next();
      }
      if (const Value* len = r.peek(); len && len->is(tag::kInteger)) {
        bc.path_len = asn1::integer_value(len->bytes());
        r.next();
      }
      if (!r.at_end()) return structure_error("malformed BasicConstraints", base);
      ext.decoded = bc;
    } else if (ext.oid == oid::kKeyUsage) {
      auto decoded = asn1::decode(ext.value, profile_.der);
      if (!decoded) return der_error(decoded.error(), base);
      if (!decoded->is(tag::kBitString)) return structure_error("KeyUsage is not a BIT STRING", base);
      KeyUsage ku;
      const auto bits = asn1::bit_string(*decoded);
      for (std::size_t i = 0; i < bits.bytes.size() && i < 2; ++i) {
        for (int b = 0; b < 8; ++b) {
          if (bits.bytes[i] & (0x80 >> b)) ku.bits |= static_cast<std::uint16_t>(1u << (i * 8 + b));
        }
      }
      ext.decoded = ku;
    }
    out.push_back(std::move(ext));
    return std::nullopt;
  }

  MaybeError map_general_names(const Value& seq, ByteView buffer, std::size_t base, GeneralNames& out) {
    if (!seq.is(tag::kSequence)) return structure_error("GeneralNames is not a SEQUENCE", base + seq.span.offset);
    for (const Value& gn : seq.children()) {
      if (gn.tag.cls != asn1::TagClass::kContextSpecific || gn.tag.number > 8) {
        return structure_error("unexpected GeneralName tag", base + gn.span.offset);
      }
      const auto type = static_cast<GeneralNameType>(gn.tag.number);
      const bool must_be_constructed = type == GeneralNameType::kOtherName ||
                                       type == GeneralNameType::kX400Address ||
                                       type == GeneralNameType::kDirectoryName ||
                                       type == GeneralNameType::kEdiPartyName;
      if (gn.tag.constructed != must_be_constructed) {
        return structure_error("GeneralName has the wrong encoding form", base + gn.span.offset);
      }
      Bytes content;
      if (gn.is_constructed()) {
        const auto span = gn.content_span();
        const auto sub = buffer.subspan(span.offset, span.length);
        content.assign(sub.begin(), sub.end());
      } else {
        content = gn.bytes();
      }
      out.names.push_back({type, std::move(content)});
    }
    return std::nullopt;
  }

  ByteView der_;
  const ValidationProfile& profile_;
};

MaybeError run_value_checks(const Certificate& cert, const ValidationProfile& profile) {
  if (auto e = check_version(cert.version, cert.has_extensions, profile)) return e;
  if (auto e = check_sig_alg_match(cert.tbs_signature_algorithm, cert.signature_algorithm, profile)) return e;
  if (auto e = check_sig_alg_supported(cert.signature_algorithm, profile)) return e;
  if (profile.check_validity_order) {
    if (auto e = check_validity(cert.not_before, cert.not_after)) return e;
  }
  if (auto e = check_extensions(cert, profile)) return e;
  if (auto e = check_names_and_uris(cert, profile)) return e;
  return std::nullopt;
}

MaybeError run_crypto_checks(const Certificate& cert, const ValidationProfile& profile) {
  if (const auto* rsa = std::get_if<RsaPublicKey>(&cert.spki.key)) {
    return check_rsa_key(rsa->modulus, rsa->exponent, profile);
  }
  if (const auto* ec = std::get_if<EcPublicKey>(&cert.spki.key)) {
    return check_ec_key(ec->curve, ec->encoded_point, profile);
  }
  return std::nullopt;
}

}  // namespace

ParseResult parse_certificate(ByteView der, const ValidationProfile& profile) {
  auto decoded = asn1::decode(der, profile.der);
  if (!decoded) return unexpected(der_error(decoded.error()));

  Certificate cert;
  if (auto e = Mapper(der, profile).map(*decoded, cert)) return unexpected(std::move(*e));
  cert.der.assign(der.begin(), der.end());

  if (auto e = run_value_checks(cert, profile)) return unexpected(std::move(*e));
  if (auto e = run_crypto_checks(cert, profile)) return unexpected(std::move(*e));
  return cert;
}

}  // namespace parseval::x509
