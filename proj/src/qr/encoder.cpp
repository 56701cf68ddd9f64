// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/qr/qr.hpp"
#include "lid/qr/reed_solomon.hpp"

namespace lid::qr {

Version select_version(int payload_len, Mode mode, EccLevel ecc, int pixel_budget) {
  if (payload_len <= 0) throw std::invalid_argument("payload length must be positive");
  if (pixel_budget < 21) throw std::invalid_argument("pixel budget must be at least 21");
  for (int n = 1; n <= kMaxVersion; ++n) {
    const Version v(n);
    if (v.modules_per_side() > pixel_budget) break;
    const auto& entry = capacity(v, ecc);
    const int cap = mode == Mode::Alphanumeric ? entry.alphanumeric_capacity : entry.byte_capacity;
    if (cap >= payload_len) return v;
  }
  throw Error(Errc::DoesNotFit, std::to_string(payload_len) + " characters at ECC " + to_char(ecc) +
                                    " do not fit a " + std::to_string(pixel_budget) + " px budget");
}

std::vector<std::uint8_t> add_ecc_and_interleave(std::span<const std::uint8_t> data, Version version,
                                                 EccLevel ecc) {
  const auto& entry = capacity(version, ecc);
  if (static_cast<int>(data.size()) != entry.data_codewords()) {
    throw Error(Errc::CodewordCountMismatch, "data codeword count does not match version/ecc");
  }
  std::vector<std::vector<std::uint8_t>> blocks, checks;
  std::size_t offset = 0;
  for (int b = 0; b < entry.block_count(); ++b) {
    const auto len = static_cast<std::size_t>(entry.data_in_block(b));
    auto block = data.subspan(offset, len);
    offset += len;
    blocks.emplace_back(block.begin(), block.end());
    checks.push_back(rs::compute_ecc(block, entry.ecc_per_block));
  }

  std::vector<std::uint8_t> out;
  out.reserve(entry.total_codewords);
  const int longest = std::max(entry.group1_data, entry.group2_data);
  for (int i = 0; i < longest; ++i) {
    for (const auto& block : blocks) {
      if (i < static_cast<int>(block.size())) out.push_back(block[i]);
    }
  }
  for (int i = 0; i < entry.ecc_per_block; ++i) {
    for (const auto& check : checks) out.push_back(check[i]);
  }
  return out;
}

QrMatrix qr_encode(std::string_view text, EccLevel ecc, int pixel_budget) {
  if (text.empty()) throw Error(Errc::CapacityExceeded, "empty payload");
  const Mode mode = is_alphanumeric(text) ? Mode::Alphanumeric : Mode::Byte;
  const Version version = select_version(static_cast<int>(text.size()), mode, ecc, pixel_budget);
  const auto data = encode_segments(text, mode, version, ecc);
  return build_matrix(version, ecc, add_ecc_and_interleave(data, version, ecc));
}

}  // namespace lid::qr
