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

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "kih/errors.hpp"
#include "kih/xof.hpp"

using namespace kih;

namespace {

std::string hex(std::span<const std::uint8_t> bytes) {
  static const char* k = "0123456789abcdef";
  std::string out;
  for (const std::uint8_t b : bytes) {
    out.push_back(k[b >> 4]);
    out.push_back(k[b & 0xf]);
  }
  return out;
}

std::string shake_hex(std::span<const std::uint8_t> data, std::size_t n) {
  Xof x;
  x.absorb(data);
  std::vector<std::uint8_t> out(n);
  x.squeeze(out);
  return hex(out);
}

}  // namespace

TEST_CASE("SHAKE256 known-answer vectors") {
  CHECK(shake_hex({}, 32) ==
        "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f");

  const std::string abc = "abc";
  Xof x;
  x.absorb(abc);
  std::vector<std::uint8_t> out(32);
  x.squeeze(out);
  CHECK(hex(out) ==
        "483366601360a8771c6863080cc4114d8db44530f8f1e1ee4f94ea37e78b5739");

  // 512 bytes: crosses the 136-byte rate boundary several times.
  std::vector<std::uint8_t> long_input(512);
  for (std::size_t i = 0; i < long_input.size(); ++i) {
    long_input[i] = static_cast<std::uint8_t>(i & 0xff);
  }
  CHECK(shake_hex(long_input, 16) == "a1d71885b0a841f03d1dc7f2738a15cc");

  const std::vector<std::uint8_t> a3(200, 0xa3);
  CHECK(shake_hex(a3, 16) == "cd8a920ed141aa0407a22d59288652e9");

  CHECK(Xof::hex_digest({}, 32) ==
        "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f");
}

TEST_CASE("absorb and squeeze are split-invariant") {
  Xof one;
  one.absorb(std::string_view("abc"));
  std::vector<std::uint8_t> a(300);
  one.squeeze(a);

  Xof two;
  two.absorb(std::string_view("a"));
  two.absorb(std::string_view("bc"));
  std::vector<std::uint8_t> b(300);
  // Squeeze in ragged chunks across the rate boundary.
  std::size_t off = 0;
  for (const std::size_t chunk : {std::size_t{7}, std::size_t{129},
                                  std::size_t{1}, std::size_t{163}}) {
    two.squeeze(std::span<std::uint8_t>(b.data() + off, chunk));
    off += chunk;
  }
  CHECK(off == b.size());
  CHECK(a == b);
}

TEST_CASE("length-prefixed blocks separate field boundaries") {
  Xof one;
  one.absorb_block(std::string_view("a"));
  one.absorb_block(std::string_view("bc"));
  Xof two;
  two.absorb_block(std::string_view("ab"));
  two.absorb_block(std::string_view("c"));
  std::vector<std::uint8_t> o1(32), o2(32);
  one.squeeze(o1);
  two.squeeze(o2);
  CHECK(o1 != o2);
}

TEST_CASE("uniform sampling stays in range without bias shortcuts") {
  Xof x;
  x.absorb(std::string_view("seed"));
  CHECK(x.uniform(1) == 0);
  for (const std::uint64_t m : {std::uint64_t{2}, std::uint64_t{16},
                                std::uint64_t{1000003},
                                (std::uint64_t{1} << 61) - 1}) {
    for (int i = 0; i < 100; ++i) {
      CHECK(x.uniform(m) < m);
    }
  }
  // Deterministic: same absorb -> same draws.
  Xof y1, y2;
  y1.absorb(std::string_view("s"));
  y2.absorb(std::string_view("s"));
  for (int i = 0; i < 20; ++i) {
    CHECK(y1.uniform(97) == y2.uniform(97));
  }
}

TEST_CASE("entropy sources replay from their seed") {
  EntropySource a = EntropySource::from_hex("00aaff");
  EntropySource b = EntropySource::from_hex("00aaff");
  for (int i = 0; i < 8; ++i) {
    CHECK(a.u64() == b.u64());
  }
  CHECK(a.seed_hex() == "00aaff");
  CHECK(a.bits(13).size() == 13);
  for (const char c : b.bits(13)) {
    CHECK((c == '0' || c == '1'));
  }
  CHECK(EntropySource::from_hex("00AAFF").seed_hex() == "00aaff");
}

TEST_CASE("forks are bound to (seed, index), not stream position") {
  EntropySource parent = EntropySource::from_hex("beef");
  EntropySource f5a = parent.fork(5);
  (void)parent.u64();  // consuming the parent must not move the forks
  (void)parent.bits(64);
  EntropySource f5b = parent.fork(5);
  for (int i = 0; i < 8; ++i) {
    CHECK(f5a.u64() == f5b.u64());
  }
  EntropySource f6 = parent.fork(6);
  bool differs = false;
  EntropySource f5c = parent.fork(5);
  for (int i = 0; i < 8; ++i) {
    differs = differs || (f6.u64() != f5c.u64());
  }
  CHECK(differs);
}

TEST_CASE("malformed entropy seeds are rejected") {
  CHECK_THROWS_AS((void)EntropySource::from_hex(""), FormatError);
  CHECK_THROWS_AS((void)EntropySource::from_hex("abc"), FormatError);
  CHECK_THROWS_AS((void)EntropySource::from_hex("zz"), FormatError);
}

TEST_CASE("system sources draw distinct seeds") {
  EntropySource a = EntropySource::system();
  EntropySource b = EntropySource::system();
  CHECK(a.seed().size() == 32);
  CHECK(a.seed_hex() != b.seed_hex());
}
