// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace lid {

/// Initializes libsodium once; throws std::runtime_error if it cannot.
void crypto_init();

using PublicKey = std::array<std::uint8_t, 32>;

/// Ed25519 signing key derived from a 32-byte seed.
class SigningKey {
 public:
  static SigningKey generate();
  static SigningKey from_seed(const std::array<std::uint8_t, 32>& seed);

  const PublicKey& public_key() const { return public_key_; }
  const std::array<std::uint8_t, 32>& seed() const { return seed_; }
  std::array<std::uint8_t, 64> sign(std::string_view message) const;

 private:
  SigningKey() = default;

  std::array<std::uint8_t, 32> seed_{};
  std::array<std::uint8_t, 64> secret_{};
  PublicKey public_key_{};
};

bool verify_signature(const PublicKey& key, std::string_view message, const std::array<std::uint8_t, 64>& signature);

std::string public_key_hex(const PublicKey& key);
/// Throws std::invalid_argument unless text (surrounding whitespace ignored) is 64 hex digits.
PublicKey parse_public_key(std::string_view text);

// Key files hold one line of hex: the seed for signing keys, the raw key for public keys.
SigningKey load_signing_key(const std::filesystem::path& path);
void save_signing_key(const SigningKey& key, const std::filesystem::path& path);
PublicKey load_public_key(const std::filesystem::path& path);
void save_public_key(const PublicKey& key, const std::filesystem::path& path);

}  // namespace lid
