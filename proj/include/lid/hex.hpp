// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lid::hex {

/// Lowercase hex.
std::string encode(std::span<const std::uint8_t> bytes);

/// Accepts either case; throws std::invalid_argument on odd length or non-hex input.
std::vector<std::uint8_t> decode(std::string_view text);

}  // namespace lid::hex
