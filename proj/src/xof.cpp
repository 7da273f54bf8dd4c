// Copyright 2026 The kih Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kih/xof.hpp"

#include <bit>
#include <cstring>
#include <random>

#include "kih/errors.hpp"

namespace kih {

namespace {

// SHAKE256 rate: 1600/8 - 2*256/8.
constexpr std::size_t kRate = 136;

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// Rotation offsets indexed [x][y] for the lane at state[x + 5y].
constexpr unsigned kRho[5][5] = {
    {0, 36, 3, 41, 18},
    {1, 44, 10, 45, 2},
    {62, 6, 43, 15, 61},
    {28, 55, 25, 21, 56},
    {27, 20, 39, 8, 14},
};

inline std::uint8_t get_byte(const std::array<std::uint64_t, 25>& s,
                             std::size_t i) {
  return static_cast<std::uint8_t>(s[i / 8] >> (8 * (i % 8)));
}

inline void xor_byte(std::array<std::uint64_t, 25>& s, std::size_t i,
                     std::uint8_t b) {
  s[i / 8] ^= static_cast<std::uint64_t>(b) << (8 * (i % 8));
}

void keccak_f1600(std::array<std::uint64_t, 25>& s) {
  for (int round = 0; round < 24; ++round) {
    // theta
    std::uint64_t c[5];
    for (int x = 0; x < 5; ++x) {
      c[x] = s[x] ^ s[x + 5] ^ s[x + 10] ^ s[x + 15] ^ s[x + 20];
    }
    for (int x = 0; x < 5; ++x) {
      const std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 5; ++y) s[x + 5 * y] ^= d;
    }
    // rho + pi
    std::uint64_t b[25];
    for (int x = 0; x < 5; ++x) {
      for (int y = 0; y < 5; ++y) {
        b[y + 5 * ((2 * x + 3 * y) % 5)] =
            std::rotl(s[x + 5 * y], static_cast<int>(kRho[x][y]));
      }
    }
    // chi
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) {
        s[x + 5 * y] =
            b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
      }
    }
    // iota
    s[0] ^= kRoundConstants[round];
  }
}

}  // namespace

Xof::Xof() = default;

void Xof::absorb(std::span<const std::uint8_t> data) {
  if (squeezing_) {
    throw InvariantError("Xof: absorb after finalize");
  }
  for (std::uint8_t byte : data) {
    xor_byte(state_, offset_, byte);
    if (++offset_ == kRate) {
      keccak_f1600(state_);
      offset_ = 0;
    }
  }
}

void Xof::absorb(std::string_view data) {
  absorb(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

void Xof::absorb_u64(std::uint64_t v) {
  std::uint8_t bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  absorb(std::span<const std::uint8_t>(bytes, 8));
}

void Xof::absorb_block(std::span<const std::uint8_t> data) {
  absorb_u64(data.size());
  absorb(data);
}

void Xof::absorb_block(std::string_view data) {
  absorb_u64(data.size());
  absorb(data);
}

void Xof::finalize() {
  if (squeezing_) return;
  xor_byte(state_, offset_, 0x1f);
  xor_byte(state_, kRate - 1, 0x80);
  keccak_f1600(state_);
  offset_ = 0;
  squeezing_ = true;
}

void Xof::squeeze(std::span<std::uint8_t> out) {
  finalize();
  for (std::uint8_t& byte : out) {
    if (offset_ == kRate) {
      keccak_f1600(state_);
      offset_ = 0;
    }
    byte = get_byte(state_, offset_++);
  }
}

std::uint8_t Xof::squeeze_byte() {
  std::uint8_t b = 0;
  squeeze(std::span<std::uint8_t>(&b, 1));
  return b;
}

std::uint64_t Xof::squeeze_u64() {
  std::uint8_t bytes[8];
  squeeze(std::span<std::uint8_t>(bytes, 8));
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | bytes[i];
  }
  return v;
}

std::uint64_t Xof::uniform(std::uint64_t modulus) {
  if (modulus == 0) {
    throw InvariantError("Xof::uniform: modulus must be positive");
  }
  if (std::has_single_bit(modulus)) {
    return squeeze_u64() & (modulus - 1);
  }
  // Rejection sampling over the largest multiple of modulus below 2^64.
  const std::uint64_t rem = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(1) << 64) % modulus);
  const std::uint64_t limit = 0 - rem;  // 2^64 - rem, wrapped
  for (;;) {
    const std::uint64_t r = squeeze_u64();
    if (r < limit || rem == 0) {
      return r % modulus;
    }
  }
}

std::string Xof::hex_digest(std::span<const std::uint8_t> data,
                            std::size_t out_len) {
  Xof x;
  x.absorb(data);
  std::vector<std::uint8_t> out(out_len);
  x.squeeze(out);
  static const char* kHex = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * out_len);
  for (std::uint8_t b : out) {
    hex.push_back(kHex[b >> 4]);
    hex.push_back(kHex[b & 0xf]);
  }
  return hex;
}

EntropySource::EntropySource(std::vector<std::uint8_t> seed)
    : seed_(std::move(seed)) {
  stream_.absorb("kih/entropy/v1");
  stream_.absorb_block(seed_);
  stream_.finalize();
}

EntropySource EntropySource::from_seed(std::span<const std::uint8_t> seed) {
  if (seed.empty()) {
    throw FormatError("entropy seed must not be empty");
  }
  return EntropySource(std::vector<std::uint8_t>(seed.begin(), seed.end()));
}

EntropySource EntropySource::from_hex(std::string_view hex) {
  if (hex.empty() || hex.size() % 2 != 0) {
    throw FormatError("entropy seed: expected an even-length hex string");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> seed(hex.size() / 2);
  for (std::size_t i = 0; i < seed.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw FormatError("entropy seed: invalid hex digit");
    }
    seed[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return EntropySource(std::move(seed));
}

EntropySource EntropySource::system() {
  std::random_device rd;
  std::vector<std::uint8_t> seed(32);
  for (std::size_t i = 0; i < seed.size(); i += 4) {
    const std::uint32_t word = rd();
    for (std::size_t j = 0; j < 4; ++j) {
      seed[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
  }
  return EntropySource(std::move(seed));
}

void EntropySource::fill(std::span<std::uint8_t> out) { stream_.squeeze(out); }

std::uint64_t EntropySource::u64() { return stream_.squeeze_u64(); }

std::uint64_t EntropySource::uniform(std::uint64_t modulus) {
  return stream_.uniform(modulus);
}

std::string EntropySource::bits(std::size_t len) {
  std::vector<std::uint8_t> bytes((len + 7) / 8);
  fill(bytes);
  std::string out(len, '0');
  for (std::size_t i = 0; i < len; ++i) {
    if ((bytes[i / 8] >> (i % 8)) & 1) {
      out[i] = '1';
    }
  }
  return out;
}

EntropySource EntropySource::fork(std::uint64_t index) const {
  Xof x;
  x.absorb("kih/fork/v1");
  x.absorb_block(seed_);
  x.absorb_u64(index);
  std::vector<std::uint8_t> child(32);
  x.squeeze(child);
  return EntropySource(std::move(child));
}

std::string EntropySource::seed_hex() const {
  static const char* kHex = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * seed_.size());
  for (std::uint8_t b : seed_) {
    hex.push_back(kHex[b >> 4]);
    hex.push_back(kHex[b & 0xf]);
  }
  return hex;
}

}  // namespace kih
