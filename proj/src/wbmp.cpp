// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/wbmp.hpp"

namespace lid::wbmp {

Bitmap::Bitmap(int width, int height, bool white) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw Error(Errc::InvalidDimensions, "bitmap dimensions must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * height, white ? 1 : 0);
}

std::size_t Bitmap::index(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) throw std::out_of_range("pixel outside bitmap");
  return static_cast<std::size_t>(y) * width_ + x;
}

void append_multibyte(std::vector<std::uint8_t>& out, std::uint32_t value) {
  std::uint8_t groups[5];
  int n = 0;
  do {
    groups[n++] = value & 0x7F;
    value >>= 7;
  } while (value != 0);
  while (n-- > 0) out.push_back(groups[n] | (n > 0 ? 0x80 : 0x00));
}

std::vector<std::uint8_t> encode(const Bitmap& bitmap) {
  std::vector<std::uint8_t> out{0x00, 0x00};
  append_multibyte(out, static_cast<std::uint32_t>(bitmap.width()));
  append_multibyte(out, static_cast<std::uint32_t>(bitmap.height()));
  const int row_bytes = (bitmap.width() + 7) / 8;
  out.reserve(out.size() + static_cast<std::size_t>(row_bytes) * bitmap.height());
  for (int y = 0; y < bitmap.height(); ++y) {
    for (int xb = 0; xb < row_bytes; ++xb) {
      std::uint8_t byte = 0;
      for (int bit = 0; bit < 8; ++bit) {
        const int x = xb * 8 + bit;
        if (x < bitmap.width() && bitmap.white(x, y)) byte |= static_cast<std::uint8_t>(0x80 >> bit);
      }
      out.push_back(byte);
    }
  }
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t byte(const char* what) {
    if (pos_ >= data_.size()) throw Error(Errc::Truncated, std::string("wbmp: truncated before ") + what);
    return data_[pos_++];
  }

  std::uint32_t multibyte(const char* what) {
    if (pos_ >= data_.size()) throw Error(Errc::Truncated, std::string("wbmp: truncated before ") + what);
    std::uint64_t value = 0;
    for (int i = 0; i < 5; ++i) {
      if (pos_ >= data_.size()) throw Error(Errc::BadMultiByteInt, std::string("wbmp: unterminated ") + what);
      const std::uint8_t b = data_[pos_++];
      value = (value << 7) | (b & 0x7F);
      if (value > 0xFFFFFFFFu) throw Error(Errc::BadMultiByteInt, std::string("wbmp: ") + what + " exceeds 32 bits");
      if ((b & 0x80) == 0) return static_cast<std::uint32_t>(value);
    }
    throw Error(Errc::BadMultiByteInt, std::string("wbmp: ") + what + " longer than 5 bytes");
  }

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::span<const std::uint8_t> rest() const { return data_.subspan(pos_); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

Bitmap decode(std::span<const std::uint8_t> data) {
  Reader r(data);
  if (const auto type = r.byte("type field"); type != 0) {
    throw Error(Errc::UnsupportedType, "wbmp: unsupported type " + std::to_string(type));
  }
  if (const auto fix = r.byte("fixed header"); fix != 0) {
    throw Error(Errc::UnsupportedType, "wbmp: nonzero fixed header field");
  }
  const std::uint32_t width = r.multibyte("width");
  const std::uint32_t height = r.multibyte("height");
  if (width == 0 || height == 0 || width > 0x7FFFFFFF || height > 0x7FFFFFFF) {
    throw Error(Errc::InvalidDimensions, "wbmp: invalid dimensions");
  }
  const std::uint64_t row_bytes = (std::uint64_t{width} + 7) / 8;
  if (row_bytes * height > r.remaining()) throw Error(Errc::Truncated, "wbmp: pixel data truncated");

  Bitmap bitmap(static_cast<int>(width), static_cast<int>(height));
  const auto pixels = r.rest();
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const std::uint8_t b = pixels[y * row_bytes + x / 8];
      bitmap.set_white(static_cast<int>(x), static_cast<int>(y), (b & (0x80 >> (x % 8))) != 0);
    }
  }
  return bitmap;
}

WbmpImage render_qr(const qr::QrMatrix& matrix, const RenderOptions& options) {
  if (options.scale < 1) throw std::invalid_argument("scale must be at least 1");
  if (options.quiet_zone < 0) throw std::invalid_argument("quiet zone must not be negative");
  const int modules = matrix.size() + 2 * options.quiet_zone;
  const int side = modules * options.scale;
  if (options.pixel_budget && side > *options.pixel_budget) {
    throw Error(Errc::BudgetExceeded, "rendered QR is " + std::to_string(side) + " px, budget is " +
                                          std::to_string(*options.pixel_budget));
  }
  Bitmap bitmap(side, side, true);
  for (int y = 0; y < side; ++y) {
    const int my = y / options.scale - options.quiet_zone;
    for (int x = 0; x < side; ++x) {
      const int mx = x / options.scale - options.quiet_zone;
      const bool inside = mx >= 0 && my >= 0 && mx < matrix.size() && my < matrix.size();
      if (inside && matrix.modules.get(mx, my)) bitmap.set_white(x, y, false);
    }
  }
  auto bytes = encode(bitmap);
  return WbmpImage{std::move(bitmap), std::move(bytes)};
}

GridSample sample_qr_grid(const Bitmap& bitmap) {
  auto fail = [](const std::string& why) { return Error(Errc::NotAQrImage, "wbmp: " + why); };
  if (bitmap.width() != bitmap.height()) throw fail("image is not square");
  const int side = bitmap.width();
  auto dark = [&](int x, int y) { return !bitmap.white(x, y); };

  int x0 = -1, y0 = -1;
  for (int y = 0; y < side && y0 < 0; ++y) {
    for (int x = 0; x < side; ++x) {
      if (dark(x, y)) {
        x0 = x;
        y0 = y;
        break;
      }
    }
  }
  if (y0 < 0) throw fail("image has no dark pixels");

  int run = 0;
  while (x0 + run < side && dark(x0 + run, y0)) ++run;
  if (run % 7 != 0) throw fail("finder edge is not a multiple of 7 pixels");
  const int scale = run / 7;
  if (x0 != y0 || x0 % scale != 0) throw fail("finder is not aligned with the quiet zone");
  const int quiet = x0 / scale;
  if ((side - 2 * x0) % scale != 0) throw fail("image side is not a whole number of modules");
  const int modules = (side - 2 * x0) / scale;
  if (!qr::Version::from_side(modules)) throw fail(std::to_string(modules) + " modules is not a QR size");

  // 1:1:3:1:1 through the finder centre.
  const int cy = y0 + 3 * scale + scale / 2;
  constexpr int kRatio[5] = {1, 1, 3, 1, 1};
  int x = x0;
  for (int i = 0; i < 5; ++i) {
    const bool want_dark = i % 2 == 0;
    int len = 0;
    while (x < side && dark(x, cy) == want_dark) ++len, ++x;
    if (len != kRatio[i] * scale) throw fail("finder does not have 1:1:3:1:1 proportions");
  }

  qr::ModuleGrid grid(modules);
  for (int my = 0; my < modules; ++my) {
    for (int mx = 0; mx < modules; ++mx) {
      grid.set(mx, my, dark(x0 + mx * scale + scale / 2, y0 + my * scale + scale / 2));
    }
  }
  return GridSample{std::move(grid), scale, quiet};
}

}  // namespace lid::wbmp
