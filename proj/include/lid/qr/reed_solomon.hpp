// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

// Reed-Solomon coding over GF(2^8) with reduction polynomial 0x11D and
// generator roots alpha^0 .. alpha^(n-1), alpha = 2, as used by QR codes.
namespace lid::qr::rs {

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) noexcept;
std::uint8_t gf_exp(int power) noexcept;

/// Generator polynomial of degree `degree`, highest-order coefficient first
/// (the leading 1 is included).
std::vector<std::uint8_t> generator(int degree);

/// Remainder of data(x) * x^ecc_count divided by generator(ecc_count).
std::vector<std::uint8_t> compute_ecc(std::span<const std::uint8_t> data, int ecc_count);

class DecodeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrects `block` (data followed by `ecc_count` check bytes) in place.
/// Returns the number of corrected bytes; throws DecodeFailure when more than
/// ecc_count / 2 bytes are wrong or the error pattern is inconsistent.
int correct(std::span<std::uint8_t> block, int ecc_count);

}  // namespace lid::qr::rs
