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

#ifndef KIH_GADGET_HPP_
#define KIH_GADGET_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kih/modmath.hpp"

namespace kih {

// Integer matrix holding gadget decompositions. Entries live over Z,
// not Z_q: sums of decompositions are accumulated without reduction so
// that multiplying by a mod-q matrix on the left reduces only at the
// end. Fresh decompositions are 0/1; d-fold sums stay below 2^32.
class Decomp {
 public:
  Decomp() = default;
  Decomp(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  void set(std::size_t r, std::size_t c, std::uint64_t v) {
    entries_[r * cols_ + c] = v;
  }

  std::span<const std::uint64_t> entries() const { return entries_; }

  bool operator==(const Decomp&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> entries_;
};

// Gadget data for a parameter set: the vector
//   g = (0, 1, 2, 4, ..., 2^(l-1))  in Z_q^d,   d = l + 1,
// and the block-diagonal expansion G = I_n (x) g of shape n x (n*d).
// The leading zero slot carries no weight in g; it exists so that the
// block width d matches the per-block decomposition layout below.
class GadgetContext {
 public:
  explicit GadgetContext(const Params& params);

  const Params& params() const { return params_; }
  std::span<const std::uint64_t> g() const { return g_; }
  const ModMatrix& G() const { return G_; }

 private:
  Params params_;
  std::vector<std::uint64_t> g_;  // length d
  ModMatrix G_;                   // n x nd mod q
};

// Per-scalar decomposition: (0, a_0, ..., a_{l-1}) where a_i are the
// binary digits of a. The zero in front pads the block to length d and
// is annihilated by the zero slot of g, so <g, decompose(a)> == a.
std::vector<std::uint64_t> bit_decompose(std::uint64_t a,
                                         const GadgetContext& ctx);

// Block decomposition of an n x nd matrix into an nd x nd matrix D
// with G * D == A (mod q). Column j of A becomes column j of D; the
// row block for input row i occupies rows [i*d, (i+1)*d).
Decomp mat_decompose(const ModMatrix& a, const GadgetContext& ctx);

// Sum over Z (no reduction). This is the only arithmetic allowed on
// decompositions besides left-multiplication.
Decomp decomp_add(const Decomp& a, const Decomp& b);

// a * d with the integer entries of d lifted into Z_modulus(a).
ModMatrix mat_mul(const ModMatrix& a, const Decomp& d);

// <g, v> without modular reduction, for verifying the value-linearity
// law: the inner product of g with a sum of fresh decompositions stays
// below 2^(l+1) and reduces to the sum of the decomposed values.
unsigned __int128 gadget_inner_unreduced(const GadgetContext& ctx,
                                         std::span<const std::uint64_t> v);

}  // namespace kih

#endif  // KIH_GADGET_HPP_
