// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace lid::qr {

/// Highest version the encoder generates.
inline constexpr int kMaxVersion = 10;

enum class EccLevel { L, M, Q, H };
enum class Mode { Alphanumeric, Byte };

/// Approximate share of codewords that can be restored (L 7%, M 15%, Q 25%, H 30%).
double recovery_fraction(EccLevel level) noexcept;
char to_char(EccLevel level) noexcept;
std::optional<EccLevel> ecc_from_char(char c) noexcept;

/// QR symbol version. Side length in modules is 17 + 4 * number.
class Version {
 public:
  constexpr explicit Version(int number) : number_(number) {
    if (number < 1 || number > 40) throw std::out_of_range("QR version must be in 1..40");
  }
  constexpr int number() const noexcept { return number_; }
  constexpr int modules_per_side() const noexcept { return 17 + 4 * number_; }

  /// Inverse of modules_per_side(); nullopt if `side` is not a QR dimension.
  static constexpr std::optional<Version> from_side(int side) noexcept {
    if (side < 21 || side > 177 || (side - 17) % 4 != 0) return std::nullopt;
    return Version((side - 17) / 4);
  }

  friend constexpr bool operator==(Version, Version) = default;
  friend constexpr auto operator<=>(Version, Version) = default;

 private:
  int number_;
};

/// Reed-Solomon block layout and capacities for one (version, ecc) pair.
struct CapacityEntry {
  int total_codewords;
  int ecc_per_block;
  int group1_blocks;
  int group1_data;  // data codewords per group-1 block
  int group2_blocks;
  int group2_data;  // group2_data == group1_data + 1 when group 2 exists
  int alphanumeric_capacity;
  int byte_capacity;

  constexpr int block_count() const noexcept { return group1_blocks + group2_blocks; }
  constexpr int data_codewords() const noexcept {
    return group1_blocks * group1_data + group2_blocks * group2_data;
  }
  constexpr int data_in_block(int block) const noexcept {
    return block < group1_blocks ? group1_data : group2_data;
  }
};

/// Table entry for version 1..kMaxVersion. Throws std::out_of_range otherwise.
const CapacityEntry& capacity(Version v, EccLevel ecc);

/// Payload characters that fit in `data_codewords` after the mode and count headers.
int computed_capacity(Mode mode, Version v, int data_codewords) noexcept;

int char_count_bits(Mode mode, Version v) noexcept;

/// Centre coordinates of alignment patterns along each axis (empty for version 1).
std::span<const int> alignment_positions(Version v);

/// Bits left over after the last codeword in the data region.
int remainder_bits(Version v) noexcept;

}  // namespace lid::qr
