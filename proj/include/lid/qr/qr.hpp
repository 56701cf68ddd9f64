// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lid/qr/capacity.hpp"

namespace lid::qr {

enum class Errc {
  DoesNotFit,
  CapacityExceeded,
  InvalidCharacterForMode,
  CodewordCountMismatch,
  UnsupportedVersion,
  FormatInfoUnrecoverable,
  EccFailure,
  MalformedSegments,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Square grid of modules, true = dark. Indexed (x = column, y = row).
class ModuleGrid {
 public:
  ModuleGrid() = default;
  explicit ModuleGrid(int size, bool dark = false)
      : size_(size), cells_(static_cast<std::size_t>(size) * size, dark ? 1 : 0) {}

  int size() const noexcept { return size_; }
  bool get(int x, int y) const { return cells_[index(x, y)] != 0; }
  void set(int x, int y, bool dark) { cells_[index(x, y)] = dark ? 1 : 0; }
  void flip(int x, int y) { cells_[index(x, y)] ^= 1; }

  friend bool operator==(const ModuleGrid&, const ModuleGrid&) = default;

 private:
  std::size_t index(int x, int y) const {
    if (x < 0 || y < 0 || x >= size_ || y >= size_) throw std::out_of_range("module outside grid");
    return static_cast<std::size_t>(y) * size_ + x;
  }

  int size_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct QrMatrix {
  Version version{1};
  EccLevel ecc = EccLevel::L;
  int mask_id = 0;
  ModuleGrid modules;

  int size() const noexcept { return modules.size(); }
};

/// True when every character of `text` is in the QR alphanumeric set.
bool is_alphanumeric(std::string_view text) noexcept;

/// Smallest version whose capacity at `ecc` holds `payload_len` characters and whose
/// side fits `pixel_budget` pixels at one pixel per module.
Version select_version(int payload_len, Mode mode, EccLevel ecc, int pixel_budget);

/// Mode indicator, count, payload bits, terminator and 0xEC/0x11 padding, filling
/// exactly the data codewords of (version, ecc).
std::vector<std::uint8_t> encode_segments(std::string_view text, Mode mode, Version version, EccLevel ecc);

/// Inverse of encode_segments over the corrected data codewords.
std::string parse_segments(std::span<const std::uint8_t> data, Version version);

/// Splits data into blocks, appends per-block ECC and interleaves.
std::vector<std::uint8_t> add_ecc_and_interleave(std::span<const std::uint8_t> data, Version version,
                                                 EccLevel ecc);

/// Places function patterns and codewords, picks the lowest-penalty mask
/// (lowest id on ties) and writes format and version information.
QrMatrix build_matrix(Version version, EccLevel ecc, std::span<const std::uint8_t> codewords);

/// Same as build_matrix but with a fixed mask.
QrMatrix build_matrix_with_mask(Version version, EccLevel ecc, std::span<const std::uint8_t> codewords,
                                int mask_id);

/// Penalty score of a finished symbol under the four standard rules.
int mask_penalty(const ModuleGrid& grid);

/// Alphanumeric mode when every character qualifies, byte mode otherwise.
QrMatrix qr_encode(std::string_view text, EccLevel ecc, int pixel_budget);

/// Decodes a pixel-perfect module grid.
std::string qr_decode_grid(const ModuleGrid& grid);

// Lower-level pieces shared by encoder, decoder and tests.
namespace detail {

/// 15-bit format word for (ecc, mask) with the BCH remainder and XOR mask applied.
std::uint32_t format_bits(EccLevel ecc, int mask_id);
/// 18-bit version word (versions >= 7).
std::uint32_t version_bits(Version v);
bool mask_applies(int mask_id, int x, int y) noexcept;
/// Modules reserved for function patterns and format/version information.
ModuleGrid function_mask(Version v);
/// Codeword bits in placement order, as (x, y) coordinates.
std::vector<std::pair<int, int>> data_module_order(Version v);

}  // namespace detail

}  // namespace lid::qr
