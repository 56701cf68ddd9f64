// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/qr/capacity.hpp"

#include <vector>

namespace lid::qr {
namespace {

// ISO/IEC 18004 error correction characteristics and character capacities,
// versions 1-10, indexed [version - 1][L, M, Q, H].
constexpr CapacityEntry kTable[kMaxVersion][4] = {
    // clang-format off
    {{ 26,  7, 1,  19, 0,   0,  25,  17}, { 26, 10, 1,  16, 0,   0,  20,  14},
     { 26, 13, 1,  13, 0,   0,  16,  11}, { 26, 17, 1,   9, 0,   0,  10,   7}},
    {{ 44, 10, 1,  34, 0,   0,  47,  32}, { 44, 16, 1,  28, 0,   0,  38,  26},
     { 44, 22, 1,  22, 0,   0,  29,  20}, { 44, 28, 1,  16, 0,   0,  20,  14}},
    {{ 70, 15, 1,  55, 0,   0,  77,  53}, { 70, 26, 1,  44, 0,   0,  61,  42},
     { 70, 18, 2,  17, 0,   0,  47,  32}, { 70, 22, 2,  13, 0,   0,  35,  24}},
    {{100, 20, 1,  80, 0,   0, 114,  78}, {100, 18, 2,  32, 0,   0,  90,  62},
     {100, 26, 2,  24, 0,   0,  67,  46}, {100, 16, 4,   9, 0,   0,  50,  34}},
    {{134, 26, 1, 108, 0,   0, 154, 106}, {134, 24, 2,  43, 0,   0, 122,  84},
     {134, 18, 2,  15, 2,  16,  87,  60}, {134, 22, 2,  11, 2,  12,  64,  44}},
    {{172, 18, 2,  68, 0,   0, 195, 134}, {172, 16, 4,  27, 0,   0, 154, 106},
     {172, 24, 4,  19, 0,   0, 108,  74}, {172, 28, 4,  15, 0,   0,  84,  58}},
    {{196, 20, 2,  78, 0,   0, 224, 154}, {196, 18, 4,  31, 0,   0, 178, 122},
     {196, 18, 2,  14, 4,  15, 125,  86}, {196, 26, 4,  13, 1,  14,  93,  64}},
    {{242, 24, 2,  97, 0,   0, 279, 192}, {242, 22, 2,  38, 2,  39, 221, 152},
     {242, 22, 4,  18, 2,  19, 157, 108}, {242, 26, 4,  14, 2,  15, 122,  84}},
    {{292, 30, 2, 116, 0,   0, 335, 230}, {292, 22, 3,  36, 2,  37, 262, 180},
     {292, 20, 4,  16, 4,  17, 189, 130}, {292, 24, 4,  12, 4,  13, 143,  98}},
    {{346, 18, 2,  68, 2,  69, 395, 271}, {346, 26, 4,  43, 1,  44, 311, 213},
     {346, 24, 6,  19, 2,  20, 221, 151}, {346, 28, 6,  15, 2,  16, 174, 119}},
    // clang-format on
};

const std::vector<int> kAlignment[kMaxVersion] = {
    {},          {6, 18},     {6, 22},     {6, 26},     {6, 30},
    {6, 34},     {6, 22, 38}, {6, 24, 42}, {6, 26, 46}, {6, 28, 50},
};

}  // namespace

double recovery_fraction(EccLevel level) noexcept {
  switch (level) {
    case EccLevel::L: return 0.07;
    case EccLevel::M: return 0.15;
    case EccLevel::Q: return 0.25;
    case EccLevel::H: return 0.30;
  }
  return 0.0;
}

char to_char(EccLevel level) noexcept { return "LMQH"[static_cast<int>(level)]; }

std::optional<EccLevel> ecc_from_char(char c) noexcept {
  switch (c) {
    case 'L': return EccLevel::L;
    case 'M': return EccLevel::M;
    case 'Q': return EccLevel::Q;
    case 'H': return EccLevel::H;
    default: return std::nullopt;
  }
}

const CapacityEntry& capacity(Version v, EccLevel ecc) {
  if (v.number() > kMaxVersion) {
    throw std::out_of_range("no capacity data for QR version " + std::to_string(v.number()));
  }
  return kTable[v.number() - 1][static_cast<int>(ecc)];
}

int char_count_bits(Mode mode, Version v) noexcept {
  const int n = v.number();
  if (mode == Mode::Alphanumeric) return n <= 9 ? 9 : n <= 26 ? 11 : 13;
  return n <= 9 ? 8 : 16;
}

int computed_capacity(Mode mode, Version v, int data_codewords) noexcept {
  const int bits = data_codewords * 8 - 4 - char_count_bits(mode, v);
  if (bits <= 0) return 0;
  if (mode == Mode::Byte) return bits / 8;
  return 2 * (bits / 11) + (bits % 11 >= 6 ? 1 : 0);
}

std::span<const int> alignment_positions(Version v) {
  if (v.number() > kMaxVersion) throw std::out_of_range("no alignment data for QR version");
  return kAlignment[v.number() - 1];
}

int remainder_bits(Version v) noexcept {
  const int n = v.number();
  if (n == 1) return 0;
  if (n <= 6) return 7;
  if (n <= 13) return 0;
  if (n <= 20) return 3;
  if (n <= 27) return 4;
  if (n <= 34) return 3;
  return 0;
}

}  // namespace lid::qr
