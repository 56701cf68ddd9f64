// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/base45.hpp"

#include <array>

namespace lid::base45 {
namespace {

constexpr std::array<std::int8_t, 256> make_reverse_table() {
  std::array<std::int8_t, 256> table{};
  for (auto& v : table) v = -1;
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
    table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<std::int8_t>(i);
  }
  return table;
}

constexpr auto kReverse = make_reverse_table();

}  // namespace

int symbol_value(char c) noexcept { return kReverse[static_cast<unsigned char>(c)]; }

std::string encode(std::span<const std::uint8_t> data) {
  std::string out;
  out.reserve(encoded_length(data.size()));
  std::size_t i = 0;
  for (; i + 1 < data.size(); i += 2) {
    unsigned v = (unsigned{data[i]} << 8) | data[i + 1];
    out.push_back(kAlphabet[v % 45]);
    v /= 45;
    out.push_back(kAlphabet[v % 45]);
    out.push_back(kAlphabet[v / 45]);
  }
  if (i < data.size()) {
    unsigned v = data[i];
    out.push_back(kAlphabet[v % 45]);
    out.push_back(kAlphabet[v / 45]);
  }
  return out;
}

std::string encode(std::string_view data) {
  return encode(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::vector<std::uint8_t> decode(std::string_view text) {
  if (text.size() % 3 == 1) {
    throw Error(Errc::InvalidLength, "base45: length " + std::to_string(text.size()) + " is 1 mod 3");
  }
  auto digit = [&](std::size_t pos) -> unsigned {
    int v = symbol_value(text[pos]);
    if (v < 0) throw Error(Errc::InvalidCharacter, "base45: invalid character at offset " + std::to_string(pos));
    return static_cast<unsigned>(v);
  };

  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 3 * 2 + 1);
  std::size_t i = 0;
  for (; i + 2 < text.size(); i += 3) {
    unsigned v = digit(i) + 45 * digit(i + 1) + 45 * 45 * digit(i + 2);
    if (v > 0xFFFF) throw Error(Errc::Overflow, "base45: triplet at offset " + std::to_string(i) + " exceeds 65535");
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  if (i < text.size()) {
    unsigned v = digit(i) + 45 * digit(i + 1);
    if (v > 0xFF) throw Error(Errc::Overflow, "base45: pair at offset " + std::to_string(i) + " exceeds 255");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

}  // namespace lid::base45
