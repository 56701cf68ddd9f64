// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/base45.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lid/qr/qr.hpp"

using lid::base45::decode;
using lid::base45::encode;
using lid::base45::Errc;
using lid::base45::Error;

namespace {

std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

Errc decode_error(std::string_view text) {
  try {
    decode(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected decode of '" << text << "' to fail";
  return Errc::InvalidCharacter;
}

}  // namespace

TEST(Base45Test, EmptyInput) {
  EXPECT_EQ(encode(std::string_view{}), "");
  EXPECT_TRUE(decode("").empty());
}

TEST(Base45Test, HandComputedPair) {
  // 0x4142 = 16706 = 11 + 45 * 11 + 2025 * 8
  EXPECT_EQ(encode("AB"), "BB8");
  EXPECT_EQ(decode("BB8"), bytes("AB"));
}

TEST(Base45Test, SingleZeroByte) {
  const std::vector<std::uint8_t> zero{0x00};
  EXPECT_EQ(encode(zero), "00");
  EXPECT_EQ(decode("00"), zero);
}

TEST(Base45Test, PublishedVectors) {
  EXPECT_EQ(encode("Hello!!"), "%69 VD92EX0");
  EXPECT_EQ(encode("base-45"), "UJCLQE7W581");
  EXPECT_EQ(decode("QED8WEX0"), bytes("ietf!"));
}

TEST(Base45Test, MaximumGroupValues) {
  EXPECT_EQ(decode("FGW"), (std::vector<std::uint8_t>{0xFF, 0xFF}));
  EXPECT_EQ(decode("U5"), (std::vector<std::uint8_t>{0xFF}));
}

TEST(Base45Test, RejectsMalformedText) {
  EXPECT_EQ(decode_error("X"), Errc::InvalidLength);
  EXPECT_EQ(decode_error("ABCD"), Errc::InvalidLength);
  EXPECT_EQ(decode_error("GGW"), Errc::Overflow);  // 65536
  EXPECT_EQ(decode_error("V5"), Errc::Overflow);   // 256
  EXPECT_EQ(decode_error("bb8"), Errc::InvalidCharacter);
  EXPECT_EQ(decode_error("BB#"), Errc::InvalidCharacter);
}

TEST(Base45Test, QrBudgetLength) {
  // 149 = 74 * 2 + 1 bytes -> 74 * 3 + 2 characters.
  const std::vector<std::uint8_t> payload(149, 0xA5);
  EXPECT_EQ(encode(payload).size(), 224u);
  EXPECT_EQ(lid::base45::encoded_length(149), 224u);
  EXPECT_EQ(lid::base45::encoded_length(150), 225u);
}

TEST(Base45Test, RoundTripPropertyUpTo4KiB) {
  std::mt19937 rng(0xB45);
  std::uniform_int_distribution<int> len_dist(0, 4096);
  std::uniform_int_distribution<int> byte_dist(0, 255);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint8_t> data(len_dist(rng));
    for (auto& b : data) b = static_cast<std::uint8_t>(byte_dist(rng));
    const auto text = encode(data);
    ASSERT_EQ(text.size(), 3 * (data.size() / 2) + (data.size() % 2) * 2);
    ASSERT_LE(text.size(), (3 * data.size() + 1) / 2 + 1);
    ASSERT_TRUE(lid::qr::is_alphanumeric(text));
    ASSERT_EQ(decode(text), data);
  }
}

TEST(Base45Test, AlphabetIsQrAlphanumericOrder) {
  ASSERT_EQ(lid::base45::kAlphabet.size(), 45u);
  for (std::size_t i = 0; i < lid::base45::kAlphabet.size(); ++i) {
    EXPECT_EQ(lid::base45::symbol_value(lid::base45::kAlphabet[i]), static_cast<int>(i));
  }
}
