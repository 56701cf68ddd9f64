// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/store.hpp"

#include <fcntl.h>
#include <sodium.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>

namespace lid::store {
namespace {

using json = nlohmann::json;

[[noreturn]] void sys_fail(const std::string& what) {
  throw Error(Errc::StorageError, what + ": " + std::strerror(errno));
}

json attributes_to_json(const std::vector<token::Attribute>& attrs) {
  json out = json::array();
  for (const auto& a : attrs) out.push_back({{"code", a.code}, {"value", a.value}});
  return out;
}

std::vector<token::Attribute> attributes_from_json(const json& j) {
  std::vector<token::Attribute> out;
  for (const auto& a : j) out.push_back({a.at("code").get<std::uint8_t>(), a.at("value").get<std::string>()});
  return out;
}

std::string hash_pin(const std::string& pin, const HashStrength& s) {
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str_alg(out, pin.data(), pin.size(), s.opslimit, s.memlimit, crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(Errc::StorageError, "PIN hashing ran out of memory");
  }
  return out;
}

bool pin_matches(const std::string& hash, const std::string& pin) {
  return crypto_pwhash_str_verify(hash.c_str(), pin.data(), pin.size()) == 0;
}

}  // namespace

const char* to_string(Errc code) {
  switch (code) {
    case Errc::AuthFailed: return "AuthFailed";
    case Errc::AlreadyRedeemed: return "AlreadyRedeemed";
    case Errc::UnknownToken: return "UnknownToken";
    case Errc::DuplicateUser: return "DuplicateUser";
    case Errc::InvalidRecord: return "InvalidRecord";
    case Errc::StorageError: return "StorageError";
    case Errc::CorruptLog: return "CorruptLog";
  }
  return "Unknown";
}

const char* to_string(UseCase u) { return u == UseCase::OfflineCredential ? "offline" : "subsidy"; }

std::optional<UseCase> parse_use_case(std::string_view s) {
  if (s == "offline") return UseCase::OfflineCredential;
  if (s == "subsidy") return UseCase::SubsidyUri;
  return std::nullopt;
}

std::string UserRecord::entitlement() const {
  for (const auto& a : attributes) {
    if (a.code == token::attr::kEntitlement) return a.value;
  }
  return {};
}

HashStrength HashStrength::interactive() {
  return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

HashStrength HashStrength::minimal() { return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN}; }

Store::Store(std::filesystem::path log_path, HashStrength strength) : path_(std::move(log_path)), strength_(strength) {
  crypto_init();
  std::array<std::uint8_t, 16> junk{};
  randombytes_buf(junk.data(), junk.size());
  dummy_hash_ = hash_pin(std::string(junk.begin(), junk.end()), strength_);
  recover();
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0) sys_fail("cannot open log " + path_.string());
}

Store::~Store() {
  if (fd_ >= 0) ::close(fd_);
}

void Store::recover() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // no log yet
  std::string data{std::istreambuf_iterator<char>(in), {}};
  in.close();
  std::size_t complete = data.rfind('\n');
  complete = complete == std::string::npos ? 0 : complete + 1;
  if (complete < data.size()) {
    // A crash mid-append leaves a final line without its newline.
    std::error_code ec;
    std::filesystem::resize_file(path_, complete, ec);
    if (ec) throw Error(Errc::StorageError, "cannot truncate torn log tail: " + ec.message());
  }
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < complete;) {
    std::size_t nl = data.find('\n', pos);
    ++line_no;
    apply_line(data.substr(pos, nl - pos), line_no);
    pos = nl + 1;
  }
}

void Store::apply_line(const std::string& line, std::size_t line_no) {
  auto corrupt = [&](const std::string& why) {
    throw Error(Errc::CorruptLog, path_.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  json j;
  try {
    j = json::parse(line);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "user") {
      UserRecord u;
      u.user_id = j.at("user_id").get<std::string>();
      u.pin_hash = j.at("pin_hash").get<std::string>();
      auto uc = parse_use_case(j.at("use_case").get<std::string>());
      if (!uc) corrupt("unknown use case");
      u.use_case = *uc;
      u.attributes = attributes_from_json(j.at("attributes"));
      u.created_at = j.at("created_at").get<std::int64_t>();
      if (!users_.emplace(u.user_id, u).second) corrupt("duplicate user " + u.user_id);
    } else if (kind == "uri_token") {
      token::UriToken t;
      t.token_id = j.at("token_id").get<std::string>();
      t.subject = j.at("subject").get<std::string>();
      t.entitlement = j.at("entitlement").get<std::string>();
      t.issued_at = j.at("issued_at").get<std::int64_t>();
      if (!tokens_.emplace(t.token_id, t).second) corrupt("duplicate token " + t.token_id);
    } else if (kind == "redemption") {
      RedemptionRecord r;
      r.token_id = j.at("token_id").get<std::string>();
      r.redeemed_at = j.at("redeemed_at").get<std::int64_t>();
      if (j.contains("verifier_note")) r.verifier_note = j.at("verifier_note").get<std::string>();
      auto it = tokens_.find(r.token_id);
      if (it == tokens_.end()) corrupt("redemption of unknown token");
      if (!redemptions_.emplace(r.token_id, r).second) corrupt("second redemption of " + r.token_id);
      it->second.state = token::TokenState::Redeemed;
    } else {
      corrupt("unknown record kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

void Store::append(const std::string& line) {
  std::string buf = line + "\n";
  const char* p = buf.data();
  std::size_t left = buf.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("log write failed");
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) sys_fail("log fsync failed");
}

UserRecord Store::put_user(const std::string& user_id, const std::string& pin, UseCase use_case,
                           std::vector<token::Attribute> attributes, std::int64_t now) {
  if (user_id.empty() || user_id.size() > token::kMaxSubjectBytes) {
    throw Error(Errc::InvalidRecord, "user id must be 1-16 bytes");
  }
  if (pin.empty()) throw Error(Errc::InvalidRecord, "PIN must not be empty");
  for (const auto& a : attributes) {
    if (a.value.size() > token::kMaxAttributeBytes) throw Error(Errc::InvalidRecord, "attribute longer than 24 bytes");
  }
  UserRecord u{user_id, hash_pin(pin, strength_), use_case, std::move(attributes), now};
  json j = {{"kind", "user"},          {"user_id", u.user_id},
            {"pin_hash", u.pin_hash},  {"use_case", to_string(u.use_case)},
            {"attributes", attributes_to_json(u.attributes)}, {"created_at", u.created_at}};
  std::string line;
  try {
    line = j.dump();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidRecord, e.what());
  }
  std::lock_guard lock(mu_);
  if (users_.count(user_id)) throw Error(Errc::DuplicateUser, "user " + user_id + " already exists");
  append(line);
  users_.emplace(user_id, u);
  return u;
}

std::optional<UserRecord> Store::get_user(const std::string& user_id) const {
  std::lock_guard lock(mu_);
  auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

UserRecord Store::authenticate(const std::string& user_id, const std::string& pin) const {
  auto user = get_user(user_id);
  // Hash verification runs outside the lock; it is the slow part.
  bool ok = pin_matches(user ? user->pin_hash : dummy_hash_, pin);
  if (!user || !ok) throw Error(Errc::AuthFailed, "unknown user or wrong PIN");
  return *user;
}

void Store::put_uri_token(const token::UriToken& t) {
  json j = {{"kind", "uri_token"},
            {"token_id", t.token_id},
            {"subject", t.subject},
            {"entitlement", t.entitlement},
            {"issued_at", t.issued_at}};
  std::string line;
  try {
    line = j.dump();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidRecord, e.what());
  }
  std::lock_guard lock(mu_);
  if (tokens_.count(t.token_id)) throw Error(Errc::InvalidRecord, "token id collision");
  append(line);
  auto stored = t;
  stored.state = token::TokenState::Issued;
  tokens_.emplace(t.token_id, stored);
}

std::optional<token::UriToken> Store::get_uri_token(const std::string& token_id) const {
  std::lock_guard lock(mu_);
  auto it = tokens_.find(token_id);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

UserData Store::redeem(const std::string& token_id, std::int64_t now, std::optional<std::string> note) {
  std::lock_guard lock(mu_);
  auto it = tokens_.find(token_id);
  if (it == tokens_.end()) throw Error(Errc::UnknownToken, "unknown token");
  if (it->second.state == token::TokenState::Redeemed) throw Error(Errc::AlreadyRedeemed, "token already redeemed");
  json j = {{"kind", "redemption"}, {"token_id", token_id}, {"redeemed_at", now}};
  if (note) j["verifier_note"] = *note;
  std::string line;
  try {
    line = j.dump();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidRecord, e.what());
  }
  append(line);
  it->second.state = token::TokenState::Redeemed;
  redemptions_[token_id] = RedemptionRecord{token_id, now, std::move(note)};
  return {it->second.subject, it->second.entitlement, now};
}

std::optional<RedemptionRecord> Store::redemption(const std::string& token_id) const {
  std::lock_guard lock(mu_);
  auto it = redemptions_.find(token_id);
  if (it == redemptions_.end()) return std::nullopt;
  return it->second;
}

std::size_t Store::user_count() const {
  std::lock_guard lock(mu_);
  return users_.size();
}

std::size_t Store::token_count() const {
  std::lock_guard lock(mu_);
  return tokens_.size();
}

std::size_t load_fixture(Store& store, const std::filesystem::path& fixture, std::int64_t now) {
  std::ifstream in(fixture);
  if (!in) throw Error(Errc::StorageError, "cannot read fixture " + fixture.string());
  std::size_t added = 0, line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = fixture.string() + ":" + std::to_string(line_no) + ": ";
    try {
      auto j = json::parse(line);
      auto id = j.at("user_id").get<std::string>();
      if (store.get_user(id)) continue;
      auto uc = parse_use_case(j.value("use_case", "offline"));
      if (!uc) throw Error(Errc::InvalidRecord, where + "unknown use_case");
      std::vector<token::Attribute> attrs;
      const json attributes = j.value("attributes", json::object());
      for (auto it = attributes.begin(); it != attributes.end(); ++it) {
        auto code = token::attribute_code(it.key());
        if (!code) throw Error(Errc::InvalidRecord, where + "unknown attribute '" + it.key() + "'");
        attrs.push_back({*code, it.value().get<std::string>()});
      }
      store.put_user(id, j.at("pin").get<std::string>(), *uc, std::move(attrs), now);
      ++added;
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidRecord, where + e.what());
    }
  }
  return added;
}

}  // namespace lid::store
