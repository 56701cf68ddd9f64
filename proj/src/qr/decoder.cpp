// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <optional>

#include "lid/qr/qr.hpp"
#include "lid/qr/reed_solomon.hpp"

namespace lid::qr {
namespace {

struct FormatInfo {
  EccLevel ecc;
  int mask_id;
  int distance;

  bool same_as(const FormatInfo& o) const { return ecc == o.ecc && mask_id == o.mask_id; }
};

constexpr int kMaxBchDistance = 3;

std::uint32_t read_format_copy(const ModuleGrid& g, bool first) {
  const int size = g.size();
  std::uint32_t bits = 0;
  auto take = [&](int i, int x, int y) {
    if (g.get(x, y)) bits |= 1u << i;
  };
  if (first) {
    for (int i = 0; i <= 5; ++i) take(i, 8, i);
    take(6, 8, 7);
    take(7, 8, 8);
    take(8, 7, 8);
    for (int i = 9; i < 15; ++i) take(i, 14 - i, 8);
  } else {
    for (int i = 0; i < 8; ++i) take(i, size - 1 - i, 8);
    for (int i = 8; i < 15; ++i) take(i, 8, size - 15 + i);
  }
  return bits;
}

std::optional<FormatInfo> nearest_format(std::uint32_t bits) {
  std::optional<FormatInfo> best;
  int best_distance = kMaxBchDistance + 1;
  for (EccLevel ecc : {EccLevel::L, EccLevel::M, EccLevel::Q, EccLevel::H}) {
    for (int mask = 0; mask < 8; ++mask) {
      const int d = std::popcount(bits ^ detail::format_bits(ecc, mask));
      if (d < best_distance) {
        best_distance = d;
        best = FormatInfo{ecc, mask, d};
      }
    }
  }
  return best;
}

std::optional<int> read_version_info(const ModuleGrid& g, bool lower_left) {
  const int size = g.size();
  std::uint32_t bits = 0;
  for (int i = 0; i < 18; ++i) {
    const int a = size - 11 + i % 3, b = i / 3;
    const bool dark = lower_left ? g.get(b, a) : g.get(a, b);
    if (dark) bits |= 1u << i;
  }
  std::optional<int> best;
  int best_distance = kMaxBchDistance + 1;
  for (int n = 7; n <= 40; ++n) {
    const int d = std::popcount(bits ^ detail::version_bits(Version(n)));
    if (d < best_distance) {
      best_distance = d;
      best = n;
    }
  }
  return best;
}

std::string decode_payload(const ModuleGrid& grid, Version version, const FormatInfo& format) {
  const auto& entry = capacity(version, format.ecc);
  const auto order = detail::data_module_order(version);
  std::vector<std::uint8_t> codewords(entry.total_codewords, 0);
  for (std::size_t i = 0; i < codewords.size() * 8; ++i) {
    const auto [x, y] = order[i];
    if (grid.get(x, y) != detail::mask_applies(format.mask_id, x, y)) {
      codewords[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    }
  }

  // Undo interleaving: data codewords column by column, then ECC codewords.
  const int blocks = entry.block_count();
  std::vector<std::vector<std::uint8_t>> split(blocks);
  std::size_t k = 0;
  const int longest = std::max(entry.group1_data, entry.group2_data);
  for (int i = 0; i < longest; ++i) {
    for (int b = 0; b < blocks; ++b) {
      if (i < entry.data_in_block(b)) split[b].push_back(codewords[k++]);
    }
  }
  for (int i = 0; i < entry.ecc_per_block; ++i) {
    for (int b = 0; b < blocks; ++b) split[b].push_back(codewords[k++]);
  }

  std::vector<std::uint8_t> data;
  data.reserve(entry.data_codewords());
  for (int b = 0; b < blocks; ++b) {
    try {
      rs::correct(split[b], entry.ecc_per_block);
    } catch (const rs::DecodeFailure& e) {
      throw Error(Errc::EccFailure, "block " + std::to_string(b) + ": " + e.what());
    }
    data.insert(data.end(), split[b].begin(), split[b].begin() + entry.data_in_block(b));
  }
  return parse_segments(data, version);
}

}  // namespace

std::string qr_decode_grid(const ModuleGrid& grid) {
  const auto version = Version::from_side(grid.size());
  if (!version) {
    throw Error(Errc::UnsupportedVersion, "grid side " + std::to_string(grid.size()) + " is not 17 + 4v");
  }
  if (version->number() > kMaxVersion) {
    throw Error(Errc::UnsupportedVersion, "version " + std::to_string(version->number()) + " not supported");
  }
  if (version->number() >= 7) {
    for (bool lower_left : {false, true}) {
      const auto read = read_version_info(grid, lower_left);
      if (read && *read != version->number()) {
        throw Error(Errc::UnsupportedVersion, "version information disagrees with grid size");
      }
    }
  }

  // Try the closer format copy first; fall back to the other if its payload fails.
  std::vector<FormatInfo> candidates;
  for (bool first : {true, false}) {
    if (auto f = nearest_format(read_format_copy(grid, first))) {
      if (candidates.empty() || !candidates.front().same_as(*f)) candidates.push_back(*f);
    }
  }
  if (candidates.empty()) {
    throw Error(Errc::FormatInfoUnrecoverable, "neither format information copy is decodable");
  }
  if (candidates.size() == 2 && candidates[1].distance < candidates[0].distance) {
    std::swap(candidates[0], candidates[1]);
  }
  for (std::size_t i = 0;; ++i) {
    try {
      return decode_payload(grid, *version, candidates[i]);
    } catch (const Error&) {
      if (i + 1 == candidates.size()) throw;
    }
  }
}

}  // namespace lid::qr
