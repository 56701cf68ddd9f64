// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lid::base45 {

/// The 45 symbols in QR alphanumeric value order: digit value i is kAlphabet[i].
inline constexpr std::string_view kAlphabet = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ $%*+-./:";

enum class Errc { InvalidCharacter, InvalidLength, Overflow };

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Returns the alphabet value of `c`, or -1 if `c` is not a base45 symbol.
int symbol_value(char c) noexcept;

/// Length of the encoding of `n` input bytes.
constexpr std::size_t encoded_length(std::size_t n) noexcept { return 3 * (n / 2) + (n % 2) * 2; }

/// Each big-endian byte pair becomes three symbols, least significant digit first;
/// a trailing odd byte becomes two symbols.
std::string encode(std::span<const std::uint8_t> data);
std::string encode(std::string_view data);

/// Strict inverse of encode(). Throws Error on foreign symbols, a length of 1 mod 3,
/// or groups whose value does not fit the bytes they stand for.
std::vector<std::uint8_t> decode(std::string_view text);

}  // namespace lid::base45
