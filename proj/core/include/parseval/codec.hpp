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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parseval {

inline std::span<const std::uint8_t> as_bytes_view(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Lowercase hex SHA-256; this is the certificate fingerprint everywhere.
std::string sha256_hex(std::span<const std::uint8_t> data);

std::string hex_encode(std::span<const std::uint8_t> data);

// Standard alphabet with padding. Decoding rejects whitespace, missing or
// misplaced padding, and characters outside the alphabet.
std::string base64_encode(std::span<const std::uint8_t> data);
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

// First "CERTIFICATE" block of a PEM document.
std::optional<std::vector<std::uint8_t>> unwrap_pem(std::string_view text);

}  // namespace parseval
