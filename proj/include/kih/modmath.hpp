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

#ifndef KIH_MODMATH_HPP_
#define KIH_MODMATH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kih/xof.hpp"

namespace kih {

// Public parameter set. Construct through make() only; the factory
// derives l and d and rejects inconsistent values.
struct Params {
  std::uint32_t n = 0;      // lattice dimension (rows of public matrices)
  std::uint64_t q = 0;      // working modulus
  std::uint64_t p = 0;      // rounding modulus, 2 <= p <= q
  std::uint32_t l = 0;      // ceil(log2 q), derived
  std::uint32_t d = 0;      // gadget length l + 1, derived
  std::string tree_desc;    // input-shape descriptor, see tree.hpp
  std::vector<std::uint8_t> prg_salt;  // domain salt for the expander

  static Params make(std::uint32_t n, std::uint64_t q, std::uint64_t p,
                     std::string tree_desc,
                     std::vector<std::uint8_t> prg_salt);

  // Columns of the public matrices: n * d.
  std::uint64_t nd() const {
    return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(d);
  }

  bool operator==(const Params&) const = default;
};

// Dense row-major matrix over Z_modulus. Entries are always kept fully
// reduced; operations check dimension and modulus compatibility.
class ModMatrix {
 public:
  ModMatrix() = default;
  // Zero matrix.
  ModMatrix(std::size_t rows, std::size_t cols, std::uint64_t modulus);
  static ModMatrix from_entries(std::size_t rows, std::size_t cols,
                                std::uint64_t modulus,
                                std::vector<std::uint64_t> entries);
  static ModMatrix identity(std::size_t n, std::uint64_t modulus);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t modulus() const { return modulus_; }
  bool empty() const { return entries_.empty(); }

  std::uint64_t at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  // v must already be reduced mod modulus().
  void set(std::size_t r, std::size_t c, std::uint64_t v) {
    entries_[r * cols_ + c] = v;
  }

  std::span<const std::uint64_t> entries() const { return entries_; }
  std::span<std::uint64_t> mutable_entries() { return entries_; }

  bool operator==(const ModMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t modulus_ = 0;
  std::vector<std::uint64_t> entries_;
};

// Scalar helpers. All arguments must be reduced; results are reduced.
std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);

// Entrywise sum / difference mod the common modulus.
ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b);
ModMatrix mat_sub(const ModMatrix& a, const ModMatrix& b);
// Entrywise scale by k (k need not be reduced).
ModMatrix mat_scale(const ModMatrix& a, std::uint64_t k);
ModMatrix mat_neg(const ModMatrix& a);
// Standard product; inner dimensions and moduli must agree.
ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b);
ModMatrix transpose(const ModMatrix& a);

// Rounding map Z_q -> Z_p: x |-> round(p*x / q) mod p, ties away from
// zero on exact halves. Computed exactly in integers as
// floor((2*p*x + q) / (2*q)) mod p; inputs just below q wrap to 0.
std::uint64_t round_to_p(std::uint64_t x, std::uint64_t q, std::uint64_t p);
// Entrywise rounding of a mod-q matrix down to Z_p.
ModMatrix round_matrix(const ModMatrix& a, std::uint64_t p);

// |e| after the centered lift of e in (-m/2, m/2].
std::uint64_t centered_abs(std::uint64_t e, std::uint64_t m);
// max over entries of centered_abs.
std::uint64_t centered_inf_norm(const ModMatrix& a);

// Uniform matrix with entries drawn from entropy.
ModMatrix sample_uniform_matrix(std::size_t rows, std::size_t cols,
                                std::uint64_t modulus,
                                EntropySource& entropy);

}  // namespace kih

#endif  // KIH_MODMATH_HPP_
