// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/keys.hpp"

#include <sodium.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <mutex>
#include <stdexcept>

#include "lid/hex.hpp"

namespace lid {
namespace {

std::string trim(std::string_view s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string(b, e) : std::string();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read key file " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text << "\n";
  if (!out) throw std::runtime_error("cannot write key file " + path.string());
}

std::array<std::uint8_t, 32> parse32(std::string_view text, const char* what) {
  auto bytes = hex::decode(trim(text));
  if (bytes.size() != 32) throw std::invalid_argument(std::string(what) + " must be 32 bytes of hex");
  std::array<std::uint8_t, 32> out{};
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

}  // namespace

void crypto_init() {
  static std::once_flag once;
  static bool ok = false;
  std::call_once(once, [] { ok = sodium_init() >= 0; });
  if (!ok) throw std::runtime_error("libsodium initialization failed");
}

SigningKey SigningKey::generate() {
  crypto_init();
  std::array<std::uint8_t, 32> seed{};
  randombytes_buf(seed.data(), seed.size());
  return from_seed(seed);
}

SigningKey SigningKey::from_seed(const std::array<std::uint8_t, 32>& seed) {
  crypto_init();
  SigningKey key;
  key.seed_ = seed;
  crypto_sign_seed_keypair(key.public_key_.data(), key.secret_.data(), seed.data());
  return key;
}

std::array<std::uint8_t, 64> SigningKey::sign(std::string_view message) const {
  std::array<std::uint8_t, 64> sig{};
  crypto_sign_detached(sig.data(), nullptr, reinterpret_cast<const unsigned char*>(message.data()), message.size(),
                       secret_.data());
  return sig;
}

bool verify_signature(const PublicKey& key, std::string_view message, const std::array<std::uint8_t, 64>& signature) {
  crypto_init();
  return crypto_sign_verify_detached(signature.data(), reinterpret_cast<const unsigned char*>(message.data()),
                                     message.size(), key.data()) == 0;
}

std::string public_key_hex(const PublicKey& key) { return hex::encode(key); }

PublicKey parse_public_key(std::string_view text) { return parse32(text, "public key"); }

SigningKey load_signing_key(const std::filesystem::path& path) {
  return SigningKey::from_seed(parse32(read_file(path), "signing key seed"));
}

void save_signing_key(const SigningKey& key, const std::filesystem::path& path) {
  write_file(path, hex::encode(key.seed()));
  std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
}

PublicKey load_public_key(const std::filesystem::path& path) { return parse_public_key(read_file(path)); }

void save_public_key(const PublicKey& key, const std::filesystem::path& path) { write_file(path, public_key_hex(key)); }

}  // namespace lid
