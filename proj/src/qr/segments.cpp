// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>

#include "lid/base45.hpp"
#include "lid/qr/qr.hpp"

namespace lid::qr {
namespace {

constexpr unsigned kModeAlphanumeric = 0b0010;
constexpr unsigned kModeByte = 0b0100;

class BitWriter {
 public:
  void put(std::uint32_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) bits_.push_back(((value >> i) & 1) != 0);
  }
  std::size_t size() const noexcept { return bits_.size(); }

  std::vector<std::uint8_t> bytes() const {
    std::vector<std::uint8_t> out(bits_.size() / 8, 0);
    for (std::size_t i = 0; i < out.size() * 8; ++i) {
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    }
    return out;
  }

 private:
  std::vector<bool> bits_;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}
  std::size_t remaining() const noexcept { return data_.size() * 8 - pos_; }
  std::uint32_t get(int bits) {
    if (remaining() < static_cast<std::size_t>(bits)) {
      throw Error(Errc::MalformedSegments, "segment runs past end of data");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < bits; ++i, ++pos_) v = (v << 1) | ((data_[pos_ / 8] >> (7 - pos_ % 8)) & 1);
    return v;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DoesNotFit: return "DoesNotFit";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::InvalidCharacterForMode: return "InvalidCharacterForMode";
    case Errc::CodewordCountMismatch: return "CodewordCountMismatch";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::FormatInfoUnrecoverable: return "FormatInfoUnrecoverable";
    case Errc::EccFailure: return "EccFailure";
    case Errc::MalformedSegments: return "MalformedSegments";
  }
  return "Unknown";
}

bool is_alphanumeric(std::string_view text) noexcept {
  for (char c : text) {
    if (base45::symbol_value(c) < 0) return false;
  }
  return true;
}

std::vector<std::uint8_t> encode_segments(std::string_view text, Mode mode, Version version, EccLevel ecc) {
  if (text.empty()) throw Error(Errc::CapacityExceeded, "empty payload");
  if (mode == Mode::Alphanumeric && !is_alphanumeric(text)) {
    throw Error(Errc::InvalidCharacterForMode, "payload has characters outside the alphanumeric set");
  }
  const auto& entry = capacity(version, ecc);
  const int limit = mode == Mode::Alphanumeric ? entry.alphanumeric_capacity : entry.byte_capacity;
  if (static_cast<int>(text.size()) > limit) {
    throw Error(Errc::CapacityExceeded, std::to_string(text.size()) + " characters exceed capacity " +
                                            std::to_string(limit));
  }

  BitWriter bw;
  if (mode == Mode::Alphanumeric) {
    bw.put(kModeAlphanumeric, 4);
    bw.put(static_cast<std::uint32_t>(text.size()), char_count_bits(mode, version));
    std::size_t i = 0;
    for (; i + 1 < text.size(); i += 2) {
      bw.put(base45::symbol_value(text[i]) * 45 + base45::symbol_value(text[i + 1]), 11);
    }
    if (i < text.size()) bw.put(base45::symbol_value(text[i]), 6);
  } else {
    bw.put(kModeByte, 4);
    bw.put(static_cast<std::uint32_t>(text.size()), char_count_bits(mode, version));
    for (char c : text) bw.put(static_cast<unsigned char>(c), 8);
  }

  const std::size_t capacity_bits = static_cast<std::size_t>(entry.data_codewords()) * 8;
  bw.put(0, static_cast<int>(std::min<std::size_t>(4, capacity_bits - bw.size())));
  bw.put(0, static_cast<int>((8 - bw.size() % 8) % 8));
  for (std::uint32_t pad = 0xEC; bw.size() < capacity_bits; pad ^= 0xEC ^ 0x11) bw.put(pad, 8);
  return bw.bytes();
}

std::string parse_segments(std::span<const std::uint8_t> data, Version version) {
  BitReader br(data);
  std::string out;
  while (br.remaining() >= 4) {
    const std::uint32_t mode = br.get(4);
    if (mode == 0) break;
    if (mode == kModeAlphanumeric) {
      std::uint32_t count = br.get(char_count_bits(Mode::Alphanumeric, version));
      for (; count >= 2; count -= 2) {
        const std::uint32_t v = br.get(11);
        if (v >= 45 * 45) throw Error(Errc::MalformedSegments, "alphanumeric pair out of range");
        out.push_back(base45::kAlphabet[v / 45]);
        out.push_back(base45::kAlphabet[v % 45]);
      }
      if (count == 1) {
        const std::uint32_t v = br.get(6);
        if (v >= 45) throw Error(Errc::MalformedSegments, "alphanumeric character out of range");
        out.push_back(base45::kAlphabet[v]);
      }
    } else if (mode == kModeByte) {
      const std::uint32_t count = br.get(char_count_bits(Mode::Byte, version));
      for (std::uint32_t i = 0; i < count; ++i) out.push_back(static_cast<char>(br.get(8)));
    } else {
      throw Error(Errc::MalformedSegments, "unsupported segment mode " + std::to_string(mode));
    }
  }
  return out;
}

}  // namespace lid::qr
