// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/token.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstdio>

#include "lid/base45.hpp"

namespace lid::token {
namespace {

constexpr std::string_view kTokenAlphabet = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

void put_field(std::vector<std::uint8_t>& out, Tag tag, std::string_view value) {
  out.push_back(static_cast<std::uint8_t>(tag));
  out.push_back(static_cast<std::uint8_t>(value.size()));
  out.insert(out.end(), value.begin(), value.end());
}

std::string be32(std::int64_t t) {
  if (t < 0 || t > 0xFFFFFFFFLL) throw Error(Errc::InvalidField, "timestamp outside 32-bit unsigned range");
  auto v = static_cast<std::uint32_t>(t);
  return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8), static_cast<char>(v)};
}

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::DecodeError, "malformed payload: " + what); }

std::string_view as_chars(std::span<const std::uint8_t> b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

std::vector<std::uint8_t> unwrap(std::string_view envelope) {
  if (!envelope.starts_with(kEnvelopePrefix)) throw Error(Errc::BadPrefix, "envelope does not start with LID1:");
  std::vector<std::uint8_t> raw;
  try {
    raw = base45::decode(envelope.substr(kEnvelopePrefix.size()));
  } catch (const base45::Error& e) {
    throw Error(Errc::DecodeError, std::string("envelope is not base45: ") + e.what());
  }
  if (raw.size() <= kSignatureBytes) throw Error(Errc::DecodeError, "envelope too short to hold a signature");
  return raw;
}

}  // namespace

std::string attribute_name(std::uint8_t code) {
  switch (code) {
    case attr::kStatus: return "status";
    case attr::kAgeOver: return "age-over";
    case attr::kEntitlement: return "entitlement";
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02x", code);
  return buf;
}

std::optional<std::uint8_t> attribute_code(std::string_view name) {
  for (std::uint8_t code : {attr::kStatus, attr::kAgeOver, attr::kEntitlement}) {
    if (attribute_name(code) == name) return code;
  }
  return std::nullopt;
}

const char* to_string(Errc code) {
  switch (code) {
    case Errc::FieldTooLong: return "FieldTooLong";
    case Errc::InvalidField: return "InvalidField";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::BadPrefix: return "BadPrefix";
    case Errc::DecodeError: return "DecodeError";
    case Errc::SignatureInvalid: return "SignatureInvalid";
    case Errc::Expired: return "Expired";
    case Errc::NotYetValid: return "NotYetValid";
    case Errc::NonceMissing: return "NonceMissing";
    case Errc::NonceMismatch: return "NonceMismatch";
    case Errc::LengthOutOfRange: return "LengthOutOfRange";
  }
  return "Unknown";
}

bool is_valid_nonce(std::string_view digits) {
  return digits.size() >= kMinNonceDigits && digits.size() <= kMaxNonceDigits &&
         std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::uint8_t> canonical_payload(const Credential& c) {
  if (c.subject.empty()) throw Error(Errc::InvalidField, "subject is empty");
  if (c.subject.size() > kMaxSubjectBytes) throw Error(Errc::FieldTooLong, "subject longer than 16 bytes");
  if (c.expires_at <= c.issued_at) throw Error(Errc::InvalidField, "expires_at must be after issued_at");
  if (c.nonce && !is_valid_nonce(*c.nonce)) throw Error(Errc::InvalidField, "nonce must be 6-10 digits");
  std::vector<std::uint8_t> out{kSchemaVersion};
  put_field(out, Tag::Subject, c.subject);
  put_field(out, Tag::IssuedAt, be32(c.issued_at));
  put_field(out, Tag::ExpiresAt, be32(c.expires_at));
  if (c.nonce) put_field(out, Tag::Nonce, *c.nonce);
  for (const auto& a : c.attributes) {
    if (a.value.size() > kMaxAttributeBytes) throw Error(Errc::FieldTooLong, "attribute value longer than 24 bytes");
    put_field(out, Tag::Attribute, std::string(1, static_cast<char>(a.code)) + a.value);
  }
  return out;
}

Credential parse_payload(std::span<const std::uint8_t> p) {
  if (p.empty() || p[0] != kSchemaVersion) malformed("unknown schema version");
  Credential c;
  std::size_t i = 1;
  int last_tag = 0;
  bool have_issued = false, have_expires = false;
  while (i < p.size()) {
    if (i + 2 > p.size()) malformed("truncated field header");
    int tag = p[i];
    std::size_t len = p[i + 1];
    i += 2;
    if (i + len > p.size()) malformed("truncated field value");
    auto value = p.subspan(i, len);
    i += len;
    if (tag < last_tag || (tag == last_tag && tag != static_cast<int>(Tag::Attribute))) malformed("fields out of order");
    last_tag = tag;
    switch (static_cast<Tag>(tag)) {
      case Tag::Subject:
        if (len == 0 || len > kMaxSubjectBytes) malformed("bad subject length");
        c.subject.assign(as_chars(value));
        break;
      case Tag::IssuedAt:
      case Tag::ExpiresAt: {
        if (len != 4) malformed("timestamp is not 4 bytes");
        std::int64_t t = (std::int64_t{value[0]} << 24) | (value[1] << 16) | (value[2] << 8) | value[3];
        (tag == static_cast<int>(Tag::IssuedAt) ? c.issued_at : c.expires_at) = t;
        (tag == static_cast<int>(Tag::IssuedAt) ? have_issued : have_expires) = true;
        break;
      }
      case Tag::Nonce:
        c.nonce.emplace(as_chars(value));
        if (!is_valid_nonce(*c.nonce)) malformed("nonce is not 6-10 digits");
        break;
      case Tag::Attribute:
        if (len < 1 || len > kMaxAttributeBytes + 1) malformed("bad attribute length");
        c.attributes.push_back({value[0], std::string(as_chars(value.subspan(1)))});
        break;
      default:
        malformed("unknown tag");
    }
  }
  if (c.subject.empty() || !have_issued || !have_expires) malformed("missing required field");
  if (c.expires_at <= c.issued_at) malformed("empty validity window");
  return c;
}

std::string seal(const Credential& c, const SigningKey& key) {
  auto payload = canonical_payload(c);
  auto sig = key.sign(as_chars(payload));
  std::vector<std::uint8_t> signed_bytes = payload;
  signed_bytes.insert(signed_bytes.end(), sig.begin(), sig.end());
  std::string envelope = std::string(kEnvelopePrefix) + base45::encode(signed_bytes);
  if (signed_bytes.size() > kMaxBinaryBytes || envelope.size() > kMaxEnvelopeChars) {
    throw Error(Errc::BudgetExceeded, "credential needs " + std::to_string(envelope.size()) +
                                          " envelope characters; the QR budget is 224");
  }
  return envelope;
}

std::string issue_offline(const std::string& subject, const std::vector<Attribute>& attributes,
                          std::int64_t validity_secs, const std::optional<std::string>& nonce,
                          const SigningKey& key, std::int64_t now) {
  if (validity_secs <= 0) throw Error(Errc::InvalidField, "validity must be positive");
  return seal(Credential{subject, attributes, now, now + validity_secs, nonce}, key);
}

Credential inspect(std::string_view envelope) {
  auto raw = unwrap(envelope);
  return parse_payload(std::span(raw).first(raw.size() - kSignatureBytes));
}

VerifiedClaims verify_offline(std::string_view envelope, const PublicKey& issuer,
                              const std::optional<std::string>& expected_nonce, std::int64_t now) {
  auto raw = unwrap(envelope);
  auto payload = std::span(raw).first(raw.size() - kSignatureBytes);
  std::array<std::uint8_t, kSignatureBytes> sig{};
  std::copy(raw.end() - kSignatureBytes, raw.end(), sig.begin());
  if (!verify_signature(issuer, as_chars(payload), sig)) {
    throw Error(Errc::SignatureInvalid, "signature does not verify under the issuer key");
  }
  Credential c = parse_payload(payload);
  if (now < c.issued_at) throw Error(Errc::NotYetValid, "credential is not valid yet");
  if (now >= c.expires_at) throw Error(Errc::Expired, "credential has expired");
  if (expected_nonce) {
    if (!c.nonce) throw Error(Errc::NonceMissing, "credential is not bound to a nonce");
    if (*c.nonce != *expected_nonce) throw Error(Errc::NonceMismatch, "credential is bound to a different nonce");
  }
  return c;
}

NonceChallenge gen_nonce(int length, std::int64_t now) {
  if (length < static_cast<int>(kMinNonceDigits) || length > static_cast<int>(kMaxNonceDigits)) {
    throw Error(Errc::LengthOutOfRange, "nonce length must be 6-10 digits");
  }
  crypto_init();
  std::string digits(static_cast<std::size_t>(length), '0');
  for (auto& d : digits) d = static_cast<char>('0' + randombytes_uniform(10));
  return {digits, now};
}

std::string gen_token_id() {
  crypto_init();
  std::string id(kTokenIdLength, '0');
  for (auto& ch : id) ch = kTokenAlphabet[randombytes_uniform(kTokenAlphabet.size())];
  return id;
}

UriIssue issue_uri(const std::string& subject, const std::string& entitlement, std::string_view base_url,
                   std::int64_t now) {
  while (base_url.ends_with('/')) base_url.remove_suffix(1);
  UriToken t{gen_token_id(), subject, entitlement, TokenState::Issued, now};
  std::string uri = std::string(base_url) + "/r/" + t.token_id;
  return {std::move(t), std::move(uri)};
}

}  // namespace lid::token
