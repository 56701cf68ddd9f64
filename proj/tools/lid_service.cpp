// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <csignal>
#include <iostream>

#include "lid/keys.hpp"
#include "lid/service.hpp"

namespace {

lid::service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

std::filesystem::path public_key_path(const std::filesystem::path& key_file) {
  auto p = key_file;
  p += ".pub";
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity service for WAP feature phones", "lid-service"};
  app.require_subcommand(1);

  std::filesystem::path key_file = "lid-service.key";
  bool force = false;
  auto* keygen = app.add_subcommand("keygen", "Create an Ed25519 signing key and <key-file>.pub");
  keygen->add_option("--key-file", key_file)->envname("LID_KEY_FILE");
  keygen->add_flag("--force", force, "Overwrite an existing key");

  auto* pubkey = app.add_subcommand("pubkey", "Print the public key of a signing key file");
  pubkey->add_option("--key-file", key_file)->envname("LID_KEY_FILE");

  std::string listen = "127.0.0.1:8080";
  lid::service::Config config;
  std::string fixture;
  bool fast_hash = false;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--listen", listen, "host:port")->envname("LID_LISTEN")->capture_default_str();
  serve->add_option("--base-url", config.base_url, "Public URL prefix (default http://<listen>)")
      ->envname("LID_BASE_URL");
  serve->add_option("--key-file", key_file, "Signing key seed file")->envname("LID_KEY_FILE")->capture_default_str();
  serve->add_option("--log-file", config.log_file, "Append-only state log")->envname("LID_LOG_FILE")
      ->capture_default_str();
  serve->add_option("--pixel-budget", config.pixel_budget, "Largest image side the phone can show")
      ->envname("LID_PIXEL_BUDGET")
      ->capture_default_str();
  serve->add_option("--validity-secs", config.validity_secs, "Credential lifetime")
      ->envname("LID_VALIDITY_SECS")
      ->capture_default_str();
  serve->add_option("--fixture", fixture, "Seed users (JSON lines) created at startup")->envname("LID_FIXTURE");
  serve->add_flag("--fast-pin-hash", fast_hash, "Cheapest Argon2id parameters (demos and tests only)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) {
      if (std::filesystem::exists(key_file) && !force) {
        std::cerr << "error: " << key_file << " exists; pass --force to replace it\n";
        return 1;
      }
      auto key = lid::SigningKey::generate();
      lid::save_signing_key(key, key_file);
      lid::save_public_key(key.public_key(), public_key_path(key_file));
      std::cout << lid::public_key_hex(key.public_key()) << "\n";
      return 0;
    }
    if (*pubkey) {
      std::cout << lid::public_key_hex(lid::load_signing_key(key_file).public_key()) << "\n";
      return 0;
    }

    std::tie(config.host, config.port) = lid::service::parse_listen(listen);
    config.key_file = key_file;
    if (std::filesystem::exists(public_key_path(key_file))) config.public_key_file = public_key_path(key_file);
    if (!fixture.empty()) config.fixture_file = fixture;
    if (fast_hash) config.hash_strength = lid::store::HashStrength::minimal();

    lid::service::Service service(config);
    int port = service.bind();
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "lid-service listening on " << config.host << ":" << port << " as " << service.base_url() << "\n"
              << "issuer key " << lid::public_key_hex(service.public_key()) << ", pixel budget " << config.pixel_budget
              << ", validity " << config.validity_secs << " s\n";
    service.run();
    g_service = nullptr;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
