// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/hex.hpp"

#include <sodium.h>

#include <stdexcept>

namespace lid::hex {

std::string encode(std::span<const std::uint8_t> bytes) {
  std::string out(bytes.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), bytes.data(), bytes.size());
  out.pop_back();
  return out;
}

std::vector<std::uint8_t> decode(std::string_view text) {
  if (text.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  std::vector<std::uint8_t> out(text.size() / 2);
  std::size_t written = 0;
  const char* end = nullptr;
  if (sodium_hex2bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written, &end) != 0 ||
      written != out.size() || end != text.data() + text.size()) {
    throw std::invalid_argument("invalid hex string");
  }
  return out;
}

}  // namespace lid::hex
