// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/qr/reed_solomon.hpp"

#include <array>

namespace lid::qr::rs {
namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= 0x11D;
  }
  for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

constexpr Tables kGf = make_tables();

std::uint8_t gf_div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw DecodeFailure("division by zero in GF(256)");
  if (a == 0) return 0;
  return kGf.exp[(kGf.log[a] + 255 - kGf.log[b]) % 255];
}

std::uint8_t gf_inv(std::uint8_t a) { return gf_div(1, a); }

// Evaluates a polynomial stored lowest-degree first.
std::uint8_t eval_low_first(std::span<const std::uint8_t> poly, std::uint8_t x) {
  std::uint8_t y = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) y = gf_mul(y, x) ^ *it;
  return y;
}

}  // namespace

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) noexcept {
  if (a == 0 || b == 0) return 0;
  return kGf.exp[kGf.log[a] + kGf.log[b]];
}

std::uint8_t gf_exp(int power) noexcept { return kGf.exp[((power % 255) + 255) % 255]; }

std::vector<std::uint8_t> generator(int degree) {
  // Multiply (x - alpha^i) for i in [0, degree).
  std::vector<std::uint8_t> g{1};
  for (int i = 0; i < degree; ++i) {
    const std::uint8_t root = gf_exp(i);
    g.push_back(0);
    for (std::size_t j = g.size() - 1; j > 0; --j) g[j] ^= gf_mul(g[j - 1], root);
  }
  return g;
}

std::vector<std::uint8_t> compute_ecc(std::span<const std::uint8_t> data, int ecc_count) {
  if (ecc_count < 1) throw std::invalid_argument("ecc_count must be at least 1");
  const auto g = generator(ecc_count);
  std::vector<std::uint8_t> rem(ecc_count, 0);
  for (std::uint8_t b : data) {
    const std::uint8_t factor = b ^ rem.front();
    rem.erase(rem.begin());
    rem.push_back(0);
    for (int i = 0; i < ecc_count; ++i) rem[i] ^= gf_mul(g[i + 1], factor);
  }
  return rem;
}

int correct(std::span<std::uint8_t> block, int ecc_count) {
  const int n = static_cast<int>(block.size());
  if (ecc_count < 1 || ecc_count >= n || n > 255) throw DecodeFailure("invalid block geometry");

  // Syndromes S_j = r(alpha^j), where block[0] is the coefficient of x^(n-1).
  auto syndromes = [&] {
    std::vector<std::uint8_t> s(ecc_count);
    for (int j = 0; j < ecc_count; ++j) {
      const std::uint8_t x = gf_exp(j);
      std::uint8_t y = 0;
      for (std::uint8_t c : block) y = gf_mul(y, x) ^ c;
      s[j] = y;
    }
    return s;
  };
  const auto synd = syndromes();
  bool clean = true;
  for (auto s : synd) clean = clean && s == 0;
  if (clean) return 0;

  // Berlekamp-Massey; polynomials lowest-degree first.
  std::vector<std::uint8_t> locator{1}, prev{1};
  int errors = 0;
  int shift = 1;
  std::uint8_t prev_disc = 1;
  for (int k = 0; k < ecc_count; ++k) {
    std::uint8_t disc = synd[k];
    for (int i = 1; i <= errors && i < static_cast<int>(locator.size()); ++i) {
      disc ^= gf_mul(locator[i], synd[k - i]);
    }
    if (disc == 0) {
      ++shift;
      continue;
    }
    const std::uint8_t coef = gf_div(disc, prev_disc);
    auto updated = locator;
    if (updated.size() < prev.size() + shift) updated.resize(prev.size() + shift, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) updated[i + shift] ^= gf_mul(coef, prev[i]);
    if (2 * errors <= k) {
      prev = locator;
      errors = k + 1 - errors;
      prev_disc = disc;
      shift = 1;
    } else {
      ++shift;
    }
    locator = std::move(updated);
  }
  while (locator.size() > 1 && locator.back() == 0) locator.pop_back();
  if (errors * 2 > ecc_count || static_cast<int>(locator.size()) - 1 != errors) {
    throw DecodeFailure("too many errors in Reed-Solomon block");
  }

  // Chien search: position i has degree n-1-i; error there iff locator(alpha^-(n-1-i)) == 0.
  std::vector<int> positions;
  for (int i = 0; i < n; ++i) {
    if (eval_low_first(locator, gf_exp(-(n - 1 - i))) == 0) positions.push_back(i);
  }
  if (static_cast<int>(positions.size()) != errors) {
    throw DecodeFailure("error locator roots do not match error count");
  }

  // Forney: omega = S(x) * locator(x) mod x^ecc_count; magnitude = X * omega(X^-1) / locator'(X^-1).
  std::vector<std::uint8_t> omega(ecc_count, 0);
  for (int i = 0; i < ecc_count; ++i) {
    for (int j = 0; j < static_cast<int>(locator.size()) && i + j < ecc_count; ++j) {
      omega[i + j] ^= gf_mul(synd[i], locator[j]);
    }
  }
  std::vector<std::uint8_t> derivative(locator.size() > 1 ? locator.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < locator.size(); i += 2) derivative[i - 1] = locator[i];

  for (int pos : positions) {
    const std::uint8_t x = gf_exp(n - 1 - pos);
    const std::uint8_t x_inv = gf_inv(x);
    const std::uint8_t denom = eval_low_first(derivative, x_inv);
    if (denom == 0) throw DecodeFailure("degenerate error locator");
    block[pos] ^= gf_mul(x, gf_div(eval_low_first(omega, x_inv), denom));
  }

  for (auto s : syndromes()) {
    if (s != 0) throw DecodeFailure("residual syndrome after correction");
  }
  return errors;
}

}  // namespace lid::qr::rs
