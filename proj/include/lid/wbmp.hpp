// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lid/qr/qr.hpp"

// WAP bitmap, type 0: uncompressed, one bit per pixel, 1 = white.
namespace lid::wbmp {

inline constexpr const char* kContentType = "image/vnd.wap.wbmp";

enum class Errc { UnsupportedType, Truncated, BadMultiByteInt, InvalidDimensions, BudgetExceeded, NotAQrImage };

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Row-major monochrome image; true = white.
class Bitmap {
 public:
  Bitmap(int width, int height, bool white = true);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool white(int x, int y) const { return pixels_[index(x, y)] != 0; }
  void set_white(int x, int y, bool white) { pixels_[index(x, y)] = white ? 1 : 0; }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::size_t index(int x, int y) const;

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

struct WbmpImage {
  Bitmap bitmap;
  std::vector<std::uint8_t> bytes;
};

/// WAP multi-byte integer: 7 bits per byte, most significant group first,
/// high bit set on every byte but the last.
void append_multibyte(std::vector<std::uint8_t>& out, std::uint32_t value);

std::vector<std::uint8_t> encode(const Bitmap& bitmap);

/// Throws Error(UnsupportedType) for a type or fixed header other than 0,
/// Truncated when the header or pixel rows are cut short and BadMultiByteInt for
/// dimensions that overflow 32 bits or never terminate.
Bitmap decode(std::span<const std::uint8_t> data);

struct RenderOptions {
  int scale = 1;       // pixels per module
  int quiet_zone = 0;  // light modules around the symbol
  std::optional<int> pixel_budget = 46;
};

/// Dark modules become black (bit 0); light modules and the quiet zone white.
WbmpImage render_qr(const qr::QrMatrix& matrix, const RenderOptions& options = {});

struct GridSample {
  qr::ModuleGrid grid;
  int scale;
  int quiet_zone;
};

/// Recovers the module grid from a pixel-exact rendering, inferring scale and
/// quiet zone from the top-left finder pattern.
GridSample sample_qr_grid(const Bitmap& bitmap);

}  // namespace lid::wbmp
