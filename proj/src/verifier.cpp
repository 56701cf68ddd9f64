// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/verifier.hpp"

#include <CLI11.hpp>
#include <ctime>
#include <fstream>
#include <httplib.h>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <regex>

#include "lid/keys.hpp"
#include "lid/qr/qr.hpp"
#include "lid/service.hpp"
#include "lid/token.hpp"
#include "lid/wbmp.hpp"

namespace lid::verifier {
namespace {

std::string iso_time(std::int64_t t) {
  std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code(token::Errc e) {
  switch (e) {
    case token::Errc::SignatureInvalid: return kSignature;
    case token::Errc::NonceMissing:
    case token::Errc::NonceMismatch: return kNonce;
    case token::Errc::Expired:
    case token::Errc::NotYetValid: return kExpiry;
    default: return kMalformed;
  }
}

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  s.erase(s.find_last_not_of(" \t\r\n") + 1);
  return s;
}

int cmd_nonce(int length, std::ostream& out) {
  out << token::gen_nonce(length).digits << "\n";
  return kOk;
}

int cmd_verify(std::string payload, const std::string& pubkey_file, const std::optional<std::string>& nonce,
               std::optional<std::int64_t> now, std::istream& in, std::ostream& out, std::ostream& err) {
  if (payload == "-") std::getline(in, payload);
  payload = trim(payload);
  PublicKey key;
  try {
    key = load_public_key(pubkey_file);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    auto claims = token::verify_offline(payload, key, nonce, now.value_or(service::system_now()));
    out << "result: valid\n";
    out << "subject: " << claims.subject << "\n";
    for (const auto& a : claims.attributes) out << token::attribute_name(a.code) << ": " << a.value << "\n";
    out << "issued_at: " << iso_time(claims.issued_at) << "\n";
    out << "expires_at: " << iso_time(claims.expires_at) << "\n";
    if (claims.nonce) out << "nonce: " << *claims.nonce << "\n";
    return kOk;
  } catch (const token::Error& e) {
    out << "result: rejected\n";
    out << "reason: " << token::to_string(e.code()) << "\n";
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  }
}

int cmd_decode(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot read " << path << "\n";
    return kUsage;
  }
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(f), {}};
  try {
    auto bitmap = wbmp::decode(bytes);
    auto sample = wbmp::sample_qr_grid(bitmap);
    out << qr::qr_decode_grid(sample.grid) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: undecodable image: " << e.what() << "\n";
    return kMalformed;
  }
}

int cmd_redeem(const std::string& uri, const std::optional<std::string>& note, std::ostream& out,
               std::ostream& err) {
  static const std::regex kUrl(R"(^(https?://[^/?#]+)(/[^?#]*)$)");
  std::smatch m;
  if (!std::regex_match(uri, m, kUrl)) {
    err << "error: not an http(s) URL: " << uri << "\n";
    return kUsage;
  }
  if (uri.starts_with("https://")) {
    err << "error: this build redeems over plain HTTP only; use an http:// URL or a TLS-terminating proxy\n";
    return kNetwork;
  }
  std::string path = m[2];
  if (note) path += "?note=" + httplib::detail::encode_query_param(*note);
  httplib::Client client(m[1]);
  if (!client.is_valid()) {
    err << "error: unsupported URL " << uri << "\n";
    return kNetwork;
  }
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  auto res = client.Get(path);
  if (!res) {
    err << "error: request failed: " << httplib::to_string(res.error()) << "\n";
    return kNetwork;
  }
  switch (res->status) {
    case 200: break;
    case 409:
      out << "result: already-redeemed\n";
      return kAlreadyRedeemed;
    case 404:
      out << "result: unknown-token\n";
      return kUnknownToken;
    default:
      err << "error: unexpected HTTP status " << res->status << "\n";
      return kNetwork;
  }
  try {
    auto body = nlohmann::json::parse(res->body);
    out << "result: redeemed\n";
    out << "subject: " << body.at("subject").get<std::string>() << "\n";
    out << "entitlement: " << body.at("entitlement").get<std::string>() << "\n";
    out << "redeemed_at: " << iso_time(body.at("redeemed_at").get<std::int64_t>()) << "\n";
    return kOk;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed response: " << e.what() << "\n";
    return kNetwork;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify identity tokens shown by feature phones", "lid-verifier"};
  app.require_subcommand(1);

  int nonce_len = 6;
  auto* nonce = app.add_subcommand("nonce", "Print a fresh numeric challenge");
  nonce->add_option("--len", nonce_len, "Number of digits")->check(CLI::Range(6, 10));

  std::string payload, pubkey;
  std::optional<std::string> expected_nonce;
  std::optional<std::int64_t> now;
  auto* verify = app.add_subcommand("verify", "Check a scanned credential offline");
  verify->add_option("--payload", payload, "Scanned text, or - to read stdin")->required();
  verify->add_option("--pubkey", pubkey, "Issuer public key file (64 hex digits)")->required();
  verify->add_option("--nonce", expected_nonce, "Challenge the credential must be bound to");
  verify->add_option("--now", now, "Unix time to check validity against");

  std::string wbmp_path;
  auto* decode = app.add_subcommand("decode", "Print the QR payload of a WBMP image");
  decode->add_option("--wbmp", wbmp_path, "WBMP file")->required();

  std::string url;
  std::optional<std::string> note;
  auto* redeem = app.add_subcommand("redeem", "Redeem a single-use URI with the service");
  redeem->add_option("--url", url, "Scanned URI")->required();
  redeem->add_option("--note", note, "Free-text note stored with the redemption");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  if (*nonce) return cmd_nonce(nonce_len, out);
  if (*verify) return cmd_verify(payload, pubkey, expected_nonce, now, in, out, err);
  if (*decode) return cmd_decode(wbmp_path, out, err);
  return cmd_redeem(url, note, out, err);
}

}  // namespace lid::verifier
