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

#ifndef KIH_KIHPRF_HPP_
#define KIH_KIHPRF_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kih/gadget.hpp"
#include "kih/modmath.hpp"
#include "kih/tree.hpp"
#include "kih/xof.hpp"

namespace kih {

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

// Three-letter alphabet produced by the almost-XOR of two bit strings.
// S0 and S1 behave like plain bits; SZ marks a position where both
// inputs carried a zero and counts double toward bit length.
enum class Symbol : std::uint8_t { S0 = 0, S1 = 1, SZ = 2 };

class SymbolString {
 public:
  SymbolString() = default;
  explicit SymbolString(std::vector<Symbol> symbols);
  // Parse from characters '0', '1', 'Z'. Throws FormatError otherwise.
  static SymbolString parse(std::string_view text);
  // Lift a plain bit string: '0' -> S0, '1' -> S1.
  static SymbolString from_bits(std::string_view bits);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol at(std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const { return symbols_; }

  // Weighted length: S0 and S1 count 1, SZ counts 2. For a string
  // produced by almost_xor on k-bit inputs this lies in [k, 2k].
  std::size_t bit_length() const;

  // Characters '0', '1', 'Z'.
  std::string render() const;

  bool operator==(const SymbolString&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

// Positionwise almost-XOR of two equal-length bit strings:
//   1,1 -> S0    0,0 -> SZ    0,1 and 1,0 -> S1
// Unlike XOR, the two zero-preserving cases stay distinguishable.
SymbolString almost_xor(std::string_view a, std::string_view b);

// ---------------------------------------------------------------------------
// Instances and seeds
// ---------------------------------------------------------------------------

// Public evaluation data: the parameter set, the input-shape tree and
// the two public matrices A_0, A_1 (each n x nd mod q).
class PrfInstance {
 public:
  PrfInstance(Params params, ModMatrix a0, ModMatrix a1);

  const Params& params() const { return params_; }
  const FullBinaryTree& tree() const { return tree_; }
  const GadgetContext& gadget() const { return gadget_; }
  const ModMatrix& a0() const { return a0_; }
  const ModMatrix& a1() const { return a1_; }
  const ModMatrix& a(int bit) const { return bit ? a1_ : a0_; }

  // Leaf count of the tree; a full input has twice this many bits.
  std::size_t half_len() const { return tree_.leaf_count(); }

  // Hex digest binding params and public matrices; used to tie caches,
  // constrained keys and ciphertext metadata to their instance.
  const std::string& digest() const { return digest_; }

 private:
  Params params_;
  FullBinaryTree tree_;
  GadgetContext gadget_;
  ModMatrix a0_;
  ModMatrix a1_;
  std::string digest_;
};

PrfInstance sample_instance(const Params& params, EntropySource& entropy);

// Secret key: S in Z_q^{n x nd}. Keys add entrywise; the scheme is
// homomorphic over exactly this addition.
struct Seed {
  ModMatrix s;

  bool operator==(const Seed&) const = default;
};

Seed keygen(const Params& params, EntropySource& entropy);
Seed seed_add(const Seed& a, const Seed& b);
Seed seed_sub(const Seed& a, const Seed& b);

// Shifted leaf matrices derived from a seed:
//   B_b = A_b + S
//   C_0 = A_1 + B_1,  C_1 = A_0 + B_1,  Cz = A_0 + B_0
// C_sym is indexed by Symbol: S0 -> C_0, S1 -> C_1, SZ -> Cz.
struct DerivedMatrices {
  ModMatrix b0;
  ModMatrix b1;
  ModMatrix c0;
  ModMatrix c1;
  ModMatrix cz;

  static DerivedMatrices from(const PrfInstance& inst, const Seed& seed);
  const ModMatrix& b(int bit) const { return bit ? b1 : b0; }
  const ModMatrix& c(Symbol s) const;
};

// ---------------------------------------------------------------------------
// Evaluation cache
// ---------------------------------------------------------------------------

struct EvalStats {
  // Internal node values rebuilt by the last cached evaluation. After
  // an incremental flip this equals the depth of the flipped leaf.
  std::size_t recomputed_nodes = 0;
  // Largest number of summands folded into one node value; structurally
  // equal to expansion(T) + 1.
  std::size_t max_added_terms = 0;
};

// Single-owner memo for repeated evaluations of one (instance, seed)
// pair. Each tree node keeps its last value keyed by the input segment
// it consumed; a lookup hits only if the segment matches. The cache
// also memoizes the expander output for the left half. Not safe for
// concurrent use.
class EvalCache {
 public:
  EvalCache() = default;

  void reset();
  const EvalStats& last_stats() const { return stats_; }

  // Full input of the most recent cached base evaluation, if any.
  const std::optional<std::string>& last_input() const { return last_input_; }

 private:
  friend class Evaluator;

  struct Slot {
    bool valid = false;
    std::string segment;
    ModMatrix value;
  };

  bool bound_ = false;
  std::uint64_t binding = 0;  // fingerprint of (instance, seed)
  std::vector<Slot> a_slots;
  std::vector<Slot> b_slots;
  std::vector<Slot> c_slots;
  Slot r0_slot;  // expander-derived left-half matrix, keyed by left half
  std::optional<std::string> last_input_;
  EvalStats stats_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// Pseudorandom expander R: {0,1}^|T| -> Z_q^{nd x n}, keyed by the
// parameter salt, the left half and the output geometry (n, d, q) —
// deliberately not by the instance matrices, so instances sharing a
// salt share the expander. Fixed function of its inputs; both the
// library evaluator and the straight-line oracle share it.
ModMatrix prg_matrix(const PrfInstance& inst, std::string_view left_half);

// Recursive node values over the three leaf alphabets. bits/symbols
// must have exactly tree().leaf_count() positions. A cache may be
// passed to memoize per-node values; pass nullptr for a fresh run.
ModMatrix eval_a(const PrfInstance& inst, std::string_view bits,
                 EvalCache* cache = nullptr);
ModMatrix eval_b(const PrfInstance& inst, const Seed& seed,
                 std::string_view bits, EvalCache* cache = nullptr);
ModMatrix eval_c(const PrfInstance& inst, const Seed& seed,
                 const SymbolString& symbols, EvalCache* cache = nullptr);

// Base map on inputs of 2|T| bits:
//   F_S(y) = round_p( S^T A_T(y_L) + R_0(y_L) * decompose(B_T(y_R)) )
// where R_0(y_L) = prg_matrix(y_L) * A_{y[0]} and y[0] is the first bit
// of the input. Output is nd x nd over Z_p.
ModMatrix prf_eval(const PrfInstance& inst, const Seed& seed,
                   std::string_view input, EvalCache* cache = nullptr);

// Mixed-alphabet variant on a bit half z0 (|T| bits) and a symbol half
// z1 (|T| symbols):
//   F'_S(z0, z1) = round_p( S^T A_T(z0) + R_0(z0) * decompose(C_T(z1)) )
ModMatrix prf_eval_prime(const PrfInstance& inst, const Seed& seed,
                         std::string_view z0, const SymbolString& z1,
                         EvalCache* cache = nullptr);

// Entrywise sum of two outputs over Z_p.
ModMatrix combine(const ModMatrix& o1, const ModMatrix& o2);

// Key-and-input homomorphism defect for inputs sharing a left half:
//   E = F'_{s1+s2}(x_L, x_R (+) y_R) - F_{s1}(x) - F_{s2}(y)
// returned as its centered infinity norm over Z_p. The defect is an
// empirical quantity: report it, never assume a bound.
std::uint64_t homomorphism_defect(const PrfInstance& inst, const Seed& s1,
                                  const Seed& s2, std::string_view x,
                                  std::string_view y);

// Re-evaluate after flipping one bit of the cached input. The cache
// must hold a prior evaluation of the same (instance, seed) whose input
// differs from `input` exactly at flipped_index; otherwise throws
// InvariantError. Rebuilds only the path above the flipped leaf.
ModMatrix eval_incremental(const PrfInstance& inst, const Seed& seed,
                           std::string_view input, std::size_t flipped_index,
                           EvalCache& cache);

}  // namespace kih

#endif  // KIH_KIHPRF_HPP_
