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

#include <cstdio>
#include <optional>

#include "parseval/asn1.hpp"

namespace parseval::asn1 {

namespace {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::seconds;

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  std::optional<int> digits(std::size_t n) {
    if (s_.size() - pos_ < n) return std::nullopt;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const char c = s_[pos_ + i];
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    pos_ += n;
    return v;
  }
  bool peek_digit() const { return pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9'; }
  bool consume(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_end() const { return pos_ == s_.size(); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<Instant> to_instant(int year, int month, int day, int hour, int minute, int second) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (month < 1 || month > 12 || day < 1 || !ymd.ok()) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
  return std::chrono::sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

std::optional<Instant> parse_der(bool utc, std::string_view text) {
  Cursor c(text);
  std::optional<int> year;
  if (utc) {
    if (text.size() != 13) return std::nullopt;
    year = c.digits(2);
    if (year) *year += *year < 50 ? 2000 : 1900;
  } else {
    if (text.size() != 15) return std::nullopt;
    year = c.digits(4);
  }
  const auto month = c.digits(2), day = c.digits(2), hour = c.digits(2), minute = c.digits(2),
             second = c.digits(2);
  if (!year || !month || !day || !hour || !minute || !second || !c.consume('Z') || !c.at_end()) {
    return std::nullopt;
  }
  return to_instant(*year, *month, *day, *hour, *minute, *second);
}

// Accepts the forms X.680 allows beyond DER: seconds may be omitted (UTCTime),
// fractional seconds (GeneralizedTime), and a +hhmm/-hhmm zone offset.
std::optional<Instant> parse_relaxed(bool utc, std::string_view text) {
  Cursor c(text);
  std::optional<int> year;
  if (utc) {
    year = c.digits(2);
    if (year) *year += *year < 50 ? 2000 : 1900;
  } else {
    year = c.digits(4);
  }
  const auto month = c.digits(2), day = c.digits(2), hour = c.digits(2), minute = c.digits(2);
  if (!year || !month || !day || !hour || !minute) return std::nullopt;
  int second = 0;
  if (c.peek_digit()) {
    const auto s = c.digits(2);
    if (!s) return std::nullopt;
    second = *s;
    if (!utc && (c.consume('.') || c.consume(','))) {
      if (!c.peek_digit()) return std::nullopt;
      while (c.peek_digit()) c.digits(1);
    }
  }
  auto t = to_instant(*year, *month, *day, *hour, *minute, second);
  if (!t) return std::nullopt;
  if (c.consume('Z')) return c.at_end() ? t : std::nullopt;
  int sign = 0;
  if (c.consume('+')) sign = 1;
  else if (c.consume('-')) sign = -1;
  if (sign == 0) return std::nullopt;
  const auto oh = c.digits(2), om = c.digits(2);
  if (!oh || !om || *oh > 23 || *om > 59 || !c.at_end()) return std::nullopt;
  return *t - sign * (hours{*oh} + minutes{*om});
}

}  // namespace

Expected<Instant, DecodeError> parse_time(const Value& value, TimeStrictness strictness) {
  const DecodeError bad{DecodeErrorKind::kBadTimeSyntax, value.span.offset};
  if (value.is_constructed() || !(value.is(tag::kUtcTime) || value.is(tag::kGeneralizedTime))) {
    return unexpected(bad);
  }
  const Bytes& b = value.bytes();
  const std::string_view text(reinterpret_cast<const char*>(b.data()), b.size());
  const bool utc = value.is(tag::kUtcTime);
  const auto t = strictness == TimeStrictness::kDer ? parse_der(utc, text) : parse_relaxed(utc, text);
  if (!t) return unexpected(bad);
  return *t;
}

std::string format_instant(Instant t) {
  const auto day = std::chrono::floor<days>(t);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace parseval::asn1
