// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lid/token.hpp"

namespace lid::store {

enum class Errc { AuthFailed, AlreadyRedeemed, UnknownToken, DuplicateUser, InvalidRecord, StorageError, CorruptLog };

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// What a successful login yields: a signed offline credential, or a
/// single-use redemption URI (the subsidy flow).
enum class UseCase { OfflineCredential, SubsidyUri };

const char* to_string(UseCase u);
std::optional<UseCase> parse_use_case(std::string_view s);

struct UserRecord {
  std::string user_id;  // also the credential subject, so at most 16 bytes
  std::string pin_hash;  // Argon2id encoded string
  UseCase use_case = UseCase::OfflineCredential;
  std::vector<token::Attribute> attributes;
  std::int64_t created_at = 0;

  /// Value of the entitlement attribute, or empty.
  std::string entitlement() const;
};

struct RedemptionRecord {
  std::string token_id;
  std::int64_t redeemed_at = 0;
  std::optional<std::string> verifier_note;
};

/// Data released by the single successful redemption.
struct UserData {
  std::string subject;
  std::string entitlement;
  std::int64_t redeemed_at = 0;
};

/// Argon2id cost parameters.
struct HashStrength {
  unsigned long long opslimit;
  std::size_t memlimit;

  static HashStrength interactive();
  /// Lowest cost libsodium accepts; for tests only.
  static HashStrength minimal();
};

/// Users, URI tokens and redemptions backed by an append-only JSON-lines log.
/// Every operation is internally synchronized. Each record is written and
/// fsync'ed before the call returns.
class Store {
 public:
  /// Opens (creating if needed) and replays the log. A torn final line is
  /// truncated away; any other bad line throws CorruptLog.
  explicit Store(std::filesystem::path log_path, HashStrength strength = HashStrength::interactive());
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& log_path() const { return path_; }

  /// Hashes the PIN and appends the user. Throws DuplicateUser or InvalidRecord.
  UserRecord put_user(const std::string& user_id, const std::string& pin, UseCase use_case,
                      std::vector<token::Attribute> attributes, std::int64_t now);
  std::optional<UserRecord> get_user(const std::string& user_id) const;
  /// Throws AuthFailed for both unknown users and wrong PINs; unknown users
  /// are checked against a dummy hash so both paths cost one Argon2id verify.
  UserRecord authenticate(const std::string& user_id, const std::string& pin) const;

  void put_uri_token(const token::UriToken& t);
  std::optional<token::UriToken> get_uri_token(const std::string& token_id) const;

  /// Exactly-once: the first call for a token returns its data, after the
  /// redemption is durable; later calls throw AlreadyRedeemed.
  UserData redeem(const std::string& token_id, std::int64_t now, std::optional<std::string> note = std::nullopt);
  std::optional<RedemptionRecord> redemption(const std::string& token_id) const;

  std::size_t user_count() const;
  std::size_t token_count() const;

 private:
  void recover();
  void apply_line(const std::string& line, std::size_t line_no);
  void append(const std::string& line);

  std::filesystem::path path_;
  HashStrength strength_;
  std::string dummy_hash_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::map<std::string, UserRecord> users_;
  std::map<std::string, token::UriToken> tokens_;
  std::map<std::string, RedemptionRecord> redemptions_;
};

/// Seed fixture: one JSON object per line with user_id, pin, use_case
/// ("offline" or "subsidy") and an attributes object keyed by attribute name.
/// Users already present are skipped. Returns the number added.
std::size_t load_fixture(Store& store, const std::filesystem::path& fixture, std::int64_t now);

}  // namespace lid::store
