// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "lid/qr/qr.hpp"

namespace lid::qr {
namespace detail {
namespace {

int ecc_format_code(EccLevel ecc) {
  switch (ecc) {
    case EccLevel::L: return 1;
    case EccLevel::M: return 0;
    case EccLevel::Q: return 3;
    case EccLevel::H: return 2;
  }
  return 0;
}

// Pattern modules go to `modules`; every touched position is marked in `reserved`.
struct Canvas {
  ModuleGrid modules;
  ModuleGrid reserved;

  explicit Canvas(int size) : modules(size), reserved(size) {}

  void put(int x, int y, bool dark) {
    modules.set(x, y, dark);
    reserved.set(x, y, true);
  }
};

void draw_finder(Canvas& c, int cx, int cy) {
  const int size = c.modules.size();
  for (int dy = -4; dy <= 4; ++dy) {
    for (int dx = -4; dx <= 4; ++dx) {
      const int x = cx + dx, y = cy + dy;
      if (x < 0 || y < 0 || x >= size || y >= size) continue;
      const int dist = std::max(std::abs(dx), std::abs(dy));
      c.put(x, y, dist != 2 && dist != 4);
    }
  }
}

void draw_alignment(Canvas& c, int cx, int cy) {
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) c.put(cx + dx, cy + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
  }
}

void draw_format(Canvas& c, std::uint32_t bits) {
  const int size = c.modules.size();
  auto bit = [bits](int i) { return ((bits >> i) & 1) != 0; };
  for (int i = 0; i <= 5; ++i) c.put(8, i, bit(i));
  c.put(8, 7, bit(6));
  c.put(8, 8, bit(7));
  c.put(7, 8, bit(8));
  for (int i = 9; i < 15; ++i) c.put(14 - i, 8, bit(i));
  for (int i = 0; i < 8; ++i) c.put(size - 1 - i, 8, bit(i));
  for (int i = 8; i < 15; ++i) c.put(8, size - 15 + i, bit(i));
  c.put(8, size - 8, true);
}

void draw_version(Canvas& c, Version v) {
  if (v.number() < 7) return;
  const int size = c.modules.size();
  const std::uint32_t bits = version_bits(v);
  for (int i = 0; i < 18; ++i) {
    const bool dark = ((bits >> i) & 1) != 0;
    const int a = size - 11 + i % 3, b = i / 3;
    c.put(a, b, dark);
    c.put(b, a, dark);
  }
}

Canvas function_patterns(Version v) {
  const int size = v.modules_per_side();
  Canvas c(size);
  for (int i = 0; i < size; ++i) {
    c.put(6, i, i % 2 == 0);
    c.put(i, 6, i % 2 == 0);
  }
  draw_finder(c, 3, 3);
  draw_finder(c, size - 4, 3);
  draw_finder(c, 3, size - 4);

  const auto pos = alignment_positions(v);
  const std::size_t last = pos.size() ? pos.size() - 1 : 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if ((i == 0 && j == 0) || (i == 0 && j == last) || (i == last && j == 0)) continue;
      draw_alignment(c, pos[i], pos[j]);
    }
  }
  draw_format(c, 0);
  draw_version(c, v);
  return c;
}

int run_penalty(const ModuleGrid& g, bool rows) {
  const int size = g.size();
  int penalty = 0;
  for (int a = 0; a < size; ++a) {
    int run = 0;
    bool color = false;
    for (int b = 0; b < size; ++b) {
      const bool m = rows ? g.get(b, a) : g.get(a, b);
      if (b > 0 && m == color) {
        ++run;
      } else {
        if (run >= 5) penalty += 3 + (run - 5);
        run = 1;
        color = m;
      }
    }
    if (run >= 5) penalty += 3 + (run - 5);
  }
  return penalty;
}

int finder_like_penalty(const ModuleGrid& g, bool rows) {
  const int size = g.size();
  int count = 0;
  for (int a = 0; a < size; ++a) {
    auto at = [&](int b) { return rows ? g.get(b, a) : g.get(a, b); };
    auto light_span = [&](int from, int to) {
      for (int b = std::max(from, 0); b < std::min(to, size); ++b) {
        if (at(b)) return false;
      }
      return true;
    };
    for (int b = 0; b + 6 < size; ++b) {
      if (at(b) && !at(b + 1) && at(b + 2) && at(b + 3) && at(b + 4) && !at(b + 5) && at(b + 6) &&
          (light_span(b - 4, b) || light_span(b + 7, b + 11))) {
        ++count;
      }
    }
  }
  return count * 40;
}

}  // namespace

std::uint32_t format_bits(EccLevel ecc, int mask_id) {
  const std::uint32_t data = (static_cast<std::uint32_t>(ecc_format_code(ecc)) << 3) | mask_id;
  std::uint32_t rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  return ((data << 10) | (rem & 0x3FF)) ^ 0x5412;
}

std::uint32_t version_bits(Version v) {
  const auto n = static_cast<std::uint32_t>(v.number());
  std::uint32_t rem = n;
  for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
  return (n << 12) | (rem & 0xFFF);
}

bool mask_applies(int mask_id, int x, int y) noexcept {
  switch (mask_id) {
    case 0: return (x + y) % 2 == 0;
    case 1: return y % 2 == 0;
    case 2: return x % 3 == 0;
    case 3: return (x + y) % 3 == 0;
    case 4: return (x / 3 + y / 2) % 2 == 0;
    case 5: return x * y % 2 + x * y % 3 == 0;
    case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
    case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
    default: return false;
  }
}

ModuleGrid function_mask(Version v) { return function_patterns(v).reserved; }

std::vector<std::pair<int, int>> data_module_order(Version v) {
  const ModuleGrid reserved = function_mask(v);
  const int size = reserved.size();
  std::vector<std::pair<int, int>> order;
  for (int right = size - 1; right >= 1; right -= 2) {
    if (right == 6) right = 5;
    const bool upward = ((right + 1) & 2) == 0;
    for (int vert = 0; vert < size; ++vert) {
      const int y = upward ? size - 1 - vert : vert;
      for (int j = 0; j < 2; ++j) {
        const int x = right - j;
        if (!reserved.get(x, y)) order.emplace_back(x, y);
      }
    }
  }
  return order;
}

}  // namespace detail

int mask_penalty(const ModuleGrid& g) {
  const int size = g.size();
  int penalty = detail::run_penalty(g, true) + detail::run_penalty(g, false);
  for (int y = 0; y + 1 < size; ++y) {
    for (int x = 0; x + 1 < size; ++x) {
      const bool c = g.get(x, y);
      if (c == g.get(x + 1, y) && c == g.get(x, y + 1) && c == g.get(x + 1, y + 1)) penalty += 3;
    }
  }
  penalty += detail::finder_like_penalty(g, true) + detail::finder_like_penalty(g, false);
  int dark = 0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) dark += g.get(x, y) ? 1 : 0;
  }
  const int total = size * size;
  penalty += std::abs(dark * 2 - total) * 10 / total * 10;
  return penalty;
}

QrMatrix build_matrix_with_mask(Version version, EccLevel ecc, std::span<const std::uint8_t> codewords,
                                int mask_id) {
  const auto& entry = capacity(version, ecc);
  if (static_cast<int>(codewords.size()) != entry.total_codewords) {
    throw Error(Errc::CodewordCountMismatch, "expected " + std::to_string(entry.total_codewords) +
                                                 " codewords, got " + std::to_string(codewords.size()));
  }
  if (mask_id < 0 || mask_id > 7) throw std::invalid_argument("mask id must be in 0..7");

  auto canvas = detail::function_patterns(version);
  const auto order = detail::data_module_order(version);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [x, y] = order[i];
    bool dark = false;
    if (i < codewords.size() * 8) dark = ((codewords[i / 8] >> (7 - i % 8)) & 1) != 0;
    canvas.modules.set(x, y, dark != detail::mask_applies(mask_id, x, y));
  }
  detail::draw_format(canvas, detail::format_bits(ecc, mask_id));
  return QrMatrix{version, ecc, mask_id, std::move(canvas.modules)};
}

QrMatrix build_matrix(Version version, EccLevel ecc, std::span<const std::uint8_t> codewords) {
  QrMatrix best;
  int best_penalty = std::numeric_limits<int>::max();
  for (int mask = 0; mask < 8; ++mask) {
    auto candidate = build_matrix_with_mask(version, ecc, codewords, mask);
    const int p = mask_penalty(candidate.modules);
    if (p < best_penalty) {
      best_penalty = p;
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace lid::qr
