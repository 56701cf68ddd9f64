// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lid/keys.hpp"

namespace lid::token {

inline constexpr std::string_view kEnvelopePrefix = "LID1:";
inline constexpr std::uint8_t kSchemaVersion = 1;
inline constexpr std::size_t kSignatureBytes = 64;
inline constexpr std::size_t kMaxBinaryBytes = 149;
inline constexpr std::size_t kMaxEnvelopeChars = 224;
inline constexpr std::size_t kMaxSubjectBytes = 16;
inline constexpr std::size_t kMaxAttributeBytes = 24;
inline constexpr std::size_t kMinNonceDigits = 6;
inline constexpr std::size_t kMaxNonceDigits = 10;
inline constexpr std::size_t kTokenIdLength = 25;  // 25 * log2(36) > 129 bits

// TLV tags, in canonical order.
enum class Tag : std::uint8_t { Subject = 0x01, IssuedAt = 0x02, ExpiresAt = 0x03, Nonce = 0x04, Attribute = 0x05 };

namespace attr {
inline constexpr std::uint8_t kStatus = 0x01;
inline constexpr std::uint8_t kAgeOver = 0x02;
inline constexpr std::uint8_t kEntitlement = 0x03;
}  // namespace attr

/// "status", "age-over", "entitlement"; hex code otherwise.
std::string attribute_name(std::uint8_t code);
/// Inverse of attribute_name for the registered names.
std::optional<std::uint8_t> attribute_code(std::string_view name);

enum class Errc {
  FieldTooLong,
  InvalidField,
  BudgetExceeded,
  BadPrefix,
  DecodeError,
  SignatureInvalid,
  Expired,
  NotYetValid,
  NonceMissing,
  NonceMismatch,
  LengthOutOfRange,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

struct Attribute {
  std::uint8_t code = 0;
  std::string value;
  bool operator==(const Attribute&) const = default;
};

/// Unsigned credential contents.
struct Credential {
  std::string subject;
  std::vector<Attribute> attributes;
  std::int64_t issued_at = 0;
  std::int64_t expires_at = 0;
  std::optional<std::string> nonce;
  bool operator==(const Credential&) const = default;
};

bool is_valid_nonce(std::string_view digits);

/// Schema byte followed by tag/length/value fields in tag order; each
/// attribute is its own TLV whose value is the code byte then the text.
/// Throws FieldTooLong or InvalidField.
std::vector<std::uint8_t> canonical_payload(const Credential& c);

/// Strict inverse of canonical_payload; throws DecodeError.
Credential parse_payload(std::span<const std::uint8_t> payload);

/// Signs and wraps a credential valid over [now, now + validity_secs).
/// Throws BudgetExceeded when the signed form would exceed the QR budget.
std::string issue_offline(const std::string& subject, const std::vector<Attribute>& attributes,
                          std::int64_t validity_secs, const std::optional<std::string>& nonce,
                          const SigningKey& key, std::int64_t now);

/// Envelope already signed; exposed for tests that need unusual field values.
std::string seal(const Credential& c, const SigningKey& key);

using VerifiedClaims = Credential;

/// Checks prefix, encoding, signature, TLV, validity window [issued_at,
/// expires_at) and, when expected_nonce is given, the nonce binding.
VerifiedClaims verify_offline(std::string_view envelope, const PublicKey& issuer,
                              const std::optional<std::string>& expected_nonce, std::int64_t now);

/// Parses an envelope without checking signature or time; throws BadPrefix or DecodeError.
Credential inspect(std::string_view envelope);

struct NonceChallenge {
  std::string digits;
  std::int64_t created_at = 0;
};

/// Uniform digits from the system CSPRNG; throws LengthOutOfRange outside 6..10.
NonceChallenge gen_nonce(int length, std::int64_t now = 0);

enum class TokenState { Issued, Redeemed };

struct UriToken {
  std::string token_id;
  std::string subject;
  std::string entitlement;
  TokenState state = TokenState::Issued;
  std::int64_t issued_at = 0;
};

struct UriIssue {
  UriToken token;
  std::string uri;
};

/// kTokenIdLength characters drawn uniformly from [0-9A-Z].
std::string gen_token_id();

/// Fresh token and its redemption URI (base_url without trailing '/' + "/r/" + id).
/// The caller persists the token.
UriIssue issue_uri(const std::string& subject, const std::string& entitlement, std::string_view base_url,
                   std::int64_t now);

}  // namespace lid::token
