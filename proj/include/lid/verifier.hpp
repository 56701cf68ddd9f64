// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lid::verifier {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kSignature = 10;
inline constexpr int kNonce = 11;
inline constexpr int kExpiry = 12;
inline constexpr int kMalformed = 13;
inline constexpr int kAlreadyRedeemed = 20;
inline constexpr int kUnknownToken = 21;
inline constexpr int kNetwork = 22;

/// Runs one command (`nonce`, `verify`, `decode` or `redeem`). args excludes
/// the program name. Reports go to out as `key: value` lines, diagnostics to err.
/// `--payload -` reads the payload from in.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lid::verifier
