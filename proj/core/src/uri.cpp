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

#include <arpa/inet.h>

#include <cctype>
#include <string>

#include "parseval/x509.hpp"

namespace parseval::x509 {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool is_unreserved(char c) { return is_alpha(c) || is_digit(c) || c == '-' || c == '.' || c == '_' || c == '~'; }
bool is_sub_delim(char c) {
  switch (c) {
    case '!': case '$': case '&': case '\'': case '(': case ')':
    case '*': case '+': case ',': case ';': case '=':
      return true;
    default:
      return false;
  }
}

// True when every character of `s` is unreserved, a sub-delim, one of
// `extra`, or part of a %XX escape.
bool all_of_class(std::string_view s, std::string_view extra) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '%') {
      if (i + 2 >= s.size()) return false;
      if (!is_hex(s[i + 1]) || !is_hex(s[i + 2])) return false;
      i += 2;
      continue;
    }
    if (is_unreserved(c) || is_sub_delim(c) || extra.find(c) != std::string_view::npos) continue;
    return false;
  }
  return true;
}

bool valid_scheme(std::string_view s) {
  if (s.empty() || !is_alpha(s[0])) return false;
  for (char c : s) {
    if (!is_alpha(c) && !is_digit(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

bool valid_ip_literal(std::string_view inner) {
  if (inner.empty()) return false;
  if (inner[0] == 'v' || inner[0] == 'V') {
    const auto dot = inner.find('.');
    if (dot == std::string_view::npos || dot < 2 || dot + 1 == inner.size()) return false;
    for (std::size_t i = 1; i < dot; ++i) {
      if (!is_hex(inner[i])) return false;
    }
    const auto rest = inner.substr(dot + 1);
    for (char c : rest) {
      if (!is_unreserved(c) && !is_sub_delim(c) && c != ':') return false;
    }
    return true;
  }
  unsigned char buf[16];
  return inet_pton(AF_INET6, std::string(inner).c_str(), buf) == 1;
}

struct Authority {
  std::string_view host;
  bool ip_literal = false;
};

std::optional<Authority> parse_authority(std::string_view a) {
  if (const auto at = a.find('@'); at != std::string_view::npos) {
    if (!all_of_class(a.substr(0, at), ":")) return std::nullopt;
    a = a.substr(at + 1);
  }
  Authority out;
  std::string_view port;
  if (!a.empty() && a[0] == '[') {
    const auto close = a.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    out.host = a.substr(1, close - 1);
    out.ip_literal = true;
    if (!valid_ip_literal(out.host)) return std::nullopt;
    const auto rest = a.substr(close + 1);
    if (!rest.empty()) {
      if (rest[0] != ':') return std::nullopt;
      port = rest.substr(1);
    }
  } else {
    const auto colon = a.find(':');
    out.host = a.substr(0, colon);
    if (colon != std::string_view::npos) port = a.substr(colon + 1);
    if (!all_of_class(out.host, "")) return std::nullopt;
  }
  for (char c : port) {
    if (!is_digit(c)) return std::nullopt;
  }
  return out;
}

struct UriParts {
  std::optional<Authority> authority;
};

std::optional<UriParts> parse_uri(std::string_view uri) {
  const auto colon = uri.find(':');
  if (colon == std::string_view::npos || !valid_scheme(uri.substr(0, colon))) return std::nullopt;
  std::string_view rest = uri.substr(colon + 1);

  if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
    if (!all_of_class(rest.substr(hash + 1), ":@/?")) return std::nullopt;
    rest = rest.substr(0, hash);
  }
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    if (!all_of_class(rest.substr(q + 1), ":@/?")) return std::nullopt;
    rest = rest.substr(0, q);
  }

  UriParts parts;
  std::string_view path = rest;
  if (rest.substr(0, 2) == "//") {
    const auto slash = rest.find('/', 2);
    parts.authority = parse_authority(rest.substr(2, slash == std::string_view::npos ? slash : slash - 2));
    if (!parts.authority) return std::nullopt;
    path = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  }
  if (!all_of_class(path, ":@/")) return std::nullopt;
  return parts;
}

}  // namespace

bool is_valid_uri(std::string_view uri) { return parse_uri(uri).has_value(); }

std::optional<std::string> uri_host(std::string_view uri) {
  const auto parts = parse_uri(uri);
  if (!parts || !parts->authority) return std::nullopt;
  return std::string(parts->authority->host);
}

}  // namespace parseval::x509
