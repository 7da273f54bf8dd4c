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

#ifndef KIH_REFERENCE_HPP_
#define KIH_REFERENCE_HPP_

#include <cstdint>
#include <string_view>

#include "kih/kihprf.hpp"
#include "kih/ue.hpp"

// Serial reference implementation. Every routine here is written
// straight-line: scalar loops, per-step reduction, no caches, no OpenMP,
// and none of the optimized kernels from the main library. It exists to
// cross-check the optimized path bit-for-bit and to serve as the serial
// baseline in benchmarks. Only the expander prg_matrix and the tree
// shape are shared with the main library — both are pinned definitions
// that the two implementations must agree on by construction.
namespace kih::ref {

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t round_to_p(std::uint64_t x, std::uint64_t q, std::uint64_t p);

ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b);
ModMatrix mat_sub(const ModMatrix& a, const ModMatrix& b);
ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b);
ModMatrix round_matrix(const ModMatrix& a, std::uint64_t p);
std::uint64_t centered_inf_norm(const ModMatrix& a);

// Recursions evaluated directly from the definitions, re-decomposing at
// every node.
ModMatrix eval_a(const PrfInstance& inst, std::string_view bits);
ModMatrix eval_b(const PrfInstance& inst, const Seed& seed,
                 std::string_view bits);
ModMatrix eval_c(const PrfInstance& inst, const Seed& seed,
                 const SymbolString& symbols);

ModMatrix prf_eval(const PrfInstance& inst, const Seed& seed,
                   std::string_view input);
ModMatrix prf_eval_prime(const PrfInstance& inst, const Seed& seed,
                         std::string_view z0, const SymbolString& z1);

std::uint64_t homomorphism_defect(const PrfInstance& inst, const Seed& s1,
                                  const Seed& s2, std::string_view x,
                                  std::string_view y);

// Host rotation recomputed from the definition.
Ciphertext ue_upd(const PrfInstance& inst, const UpdateToken& tok,
                  const Ciphertext& c);

}  // namespace kih::ref

#endif  // KIH_REFERENCE_HPP_
