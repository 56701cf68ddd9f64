// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "lid/keys.hpp"
#include "lid/store.hpp"

namespace lid::service {

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  /// Absolute URL prefix used in decks and redemption URIs; empty means http://host:port.
  std::string base_url;
  std::filesystem::path key_file;
  /// When set, must hold the public key matching key_file.
  std::optional<std::filesystem::path> public_key_file;
  std::filesystem::path log_file = "lid-state.jsonl";
  std::optional<std::filesystem::path> fixture_file;
  int pixel_budget = 46;
  std::int64_t validity_secs = 86'400;
  store::HashStrength hash_strength = store::HashStrength::interactive();
  /// Unix seconds; defaults to the system clock.
  std::function<std::int64_t()> clock;
};

/// Throws std::invalid_argument for a pixel budget below 21, a non-positive
/// validity or a port outside 0..65535.
void validate(const Config& config);

std::int64_t system_now();

/// Parses "host:port" (or ":port", or a bare port). Throws std::invalid_argument.
std::pair<std::string, int> parse_listen(const std::string& text);

/// The identity service: WML decks for the phone, WBMP QR images, single-use
/// redemption and the issuer key for verifiers.
class Service {
 public:
  /// Loads the signing key, opens the store and applies the seed fixture.
  explicit Service(Config config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and returns the bound port.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  /// bind() plus run() on a background thread; returns the port once ready.
  int start();
  void stop();

  const std::string& base_url() const;
  const PublicKey& public_key() const;
  store::Store& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lid::service
