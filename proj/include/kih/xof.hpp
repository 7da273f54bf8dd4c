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

#ifndef KIH_XOF_HPP_
#define KIH_XOF_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kih {

// SHAKE256 extendable-output function over Keccak-f[1600].
// Self-contained; every pseudorandom byte in the library flows through
// this primitive so that fixed seeds give bit-identical artifacts on
// every platform.
class Xof {
 public:
  Xof();

  // Absorb more input. Must not be called after finalize().
  void absorb(std::span<const std::uint8_t> data);
  void absorb(std::string_view data);
  // Absorbs the 8-byte little-endian encoding of v.
  void absorb_u64(std::uint64_t v);
  // Absorbs a length-prefixed block: LE64(size) followed by the bytes.
  // Prefixing keeps distinct field sequences from colliding.
  void absorb_block(std::span<const std::uint8_t> data);
  void absorb_block(std::string_view data);

  // Apply padding and switch to squeezing. Squeeze functions call this
  // implicitly on first use.
  void finalize();

  void squeeze(std::span<std::uint8_t> out);
  std::uint8_t squeeze_byte();
  // Next 8 squeezed bytes, little-endian.
  std::uint64_t squeeze_u64();

  // Uniform residue in [0, modulus). Power-of-two moduli are masked;
  // all others use rejection sampling, so no bias either way.
  std::uint64_t uniform(std::uint64_t modulus);

  // One-shot convenience: SHAKE256(data), first out_len bytes as hex.
  static std::string hex_digest(std::span<const std::uint8_t> data,
                                std::size_t out_len);

 private:
  void permute();

  std::array<std::uint64_t, 25> state_{};
  std::size_t offset_ = 0;  // byte position within the rate block
  bool squeezing_ = false;
};

// Deterministic entropy source. All randomness in the library is drawn
// from one of these, so any run can be replayed from its seed. "System"
// sources just seed from the OS RNG; after construction every source
// behaves identically.
class EntropySource {
 public:
  static EntropySource from_seed(std::span<const std::uint8_t> seed);
  // Seed given as a hex string (as accepted by the CLI --entropy flag).
  static EntropySource from_hex(std::string_view hex);
  // Fresh 32-byte seed from the operating system RNG.
  static EntropySource system();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t u64();
  std::uint64_t uniform(std::uint64_t modulus);
  // String of '0'/'1' characters, len bits.
  std::string bits(std::size_t len);

  // Independent substream bound to (seed, index). Forking by trial
  // index makes parallel report loops emit bytes identical to a serial
  // run regardless of thread count or interleaving.
  EntropySource fork(std::uint64_t index) const;

  const std::vector<std::uint8_t>& seed() const { return seed_; }
  std::string seed_hex() const;

 private:
  explicit EntropySource(std::vector<std::uint8_t> seed);

  std::vector<std::uint8_t> seed_;
  Xof stream_;
};

}  // namespace kih

#endif  // KIH_XOF_HPP_
