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

#include "kih/cprf.hpp"

#include <string>

#include "kih/errors.hpp"

namespace kih {

namespace {

void check_half_bits(const PrfInstance& inst, std::string_view bits,
                     const char* what) {
  if (bits.size() != inst.half_len()) {
    throw PreconditionError(std::string(what) + ": expected " +
                            std::to_string(inst.half_len()) + " bits");
  }
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw PreconditionError(std::string(what) + ": input must be 0/1");
    }
  }
}

void check_key(const PrfInstance& inst, const ConstrainedKey& ck) {
  if (ck.instance != inst.digest()) {
    throw PreconditionError(
        "constrained key: bound to a different instance");
  }
  if (ck.x0.size() != inst.half_len()) {
    throw PreconditionError("constrained key: fixed half has wrong length");
  }
  const std::uint64_t nd = inst.params().nd();
  if (ck.value.rows() != nd || ck.value.cols() != nd ||
      ck.value.modulus() != inst.params().p) {
    // The digest matched, so the shape is fixed; a mismatch means the
    // key material itself is damaged.
    throw InvariantError("constrained key: pinned value has wrong shape");
  }
}

std::string padding(const PrfInstance& inst, ConstrainMode mode) {
  return std::string(inst.half_len(),
                     mode == ConstrainMode::kOnes ? '1' : '0');
}

std::string assemble(const ConstrainedKey& ck, std::string_view free_half) {
  if (ck.side == ConstrainSide::kLeft) {
    return ck.x0 + std::string(free_half);
  }
  return std::string(free_half) + ck.x0;
}

ModMatrix combine_with_pin(const PrfInstance& inst, const ConstrainedKey& ck,
                           const Seed& k1, std::string_view free_half) {
  return combine(prf_eval(inst, k1, assemble(ck, free_half)), ck.value);
}

}  // namespace

ConstrainedKey constrain(const PrfInstance& inst, const Seed& k0,
                         std::string_view x0, ConstrainSide side,
                         ConstrainMode mode) {
  check_half_bits(inst, x0, "constrain");
  const std::string pad = padding(inst, mode);
  const std::string padded = side == ConstrainSide::kLeft
                                 ? std::string(x0) + pad
                                 : pad + std::string(x0);
  ConstrainedKey ck;
  ck.side = side;
  ck.mode = mode;
  ck.x0 = std::string(x0);
  ck.instance = inst.digest();
  ck.value = prf_eval(inst, k0, padded);
  return ck;
}

ModMatrix eval_constrained(const PrfInstance& inst, const ConstrainedKey& ck,
                           const Seed& k1, std::string_view x1target) {
  check_key(inst, ck);
  if (ck.mode != ConstrainMode::kOnes) {
    throw PreconditionError(
        "eval_constrained: bit targets need a ones-padded key; use the "
        "symbol form for zeros padding");
  }
  check_half_bits(inst, x1target, "eval_constrained");
  // Against all-ones padding the almost-XOR acts as plain XOR on the
  // free half, so inverting the target bits steers the combined value.
  std::string x1prime(x1target);
  for (char& c : x1prime) {
    c = c == '0' ? '1' : '0';
  }
  return combine_with_pin(inst, ck, k1, x1prime);
}

ModMatrix eval_constrained_symbols(const PrfInstance& inst,
                                   const ConstrainedKey& ck, const Seed& k1,
                                   const SymbolString& target) {
  check_key(inst, ck);
  if (ck.mode != ConstrainMode::kZeros) {
    throw PreconditionError(
        "eval_constrained_symbols: symbol targets need a zeros-padded key");
  }
  if (target.size() != inst.half_len()) {
    throw PreconditionError(
        "eval_constrained_symbols: one symbol per free-half position");
  }
  // Reachable set against all-zeros padding: 0 (+) 1 = S1, 0 (+) 0 = SZ.
  // S0 would need a 1 in the padding, so it is rejected, not mapped.
  std::string x1prime;
  x1prime.reserve(target.size());
  for (Symbol s : target.symbols()) {
    if (s == Symbol::S0) {
      throw PreconditionError(
          "eval_constrained_symbols: S0 is unreachable under zeros padding");
    }
    x1prime.push_back(s == Symbol::S1 ? '1' : '0');
  }
  return combine_with_pin(inst, ck, k1, x1prime);
}

SymbolString claimed_target_symbols(const ConstrainedKey& ck,
                                    std::string_view x1target) {
  if (ck.mode == ConstrainMode::kOnes) {
    return SymbolString::from_bits(x1target);
  }
  const SymbolString target = SymbolString::parse(x1target);
  for (Symbol s : target.symbols()) {
    if (s == Symbol::S0) {
      throw PreconditionError(
          "claimed_target_symbols: S0 is unreachable under zeros padding");
    }
  }
  return target;
}

std::uint64_t constrained_defect(const PrfInstance& inst,
                                 const ConstrainedKey& ck, const Seed& k0,
                                 const Seed& k1, std::string_view x1target) {
  const ModMatrix got = eval_constrained(inst, ck, k1, x1target);
  const ModMatrix direct = prf_eval_prime(
      inst, seed_add(k0, k1), ck.x0, SymbolString::from_bits(x1target));
  return centered_inf_norm(mat_sub(got, direct));
}

std::uint64_t constrained_defect_symbols(const PrfInstance& inst,
                                         const ConstrainedKey& ck,
                                         const Seed& k0, const Seed& k1,
                                         const SymbolString& target) {
  const ModMatrix got = eval_constrained_symbols(inst, ck, k1, target);
  const ModMatrix direct =
      prf_eval_prime(inst, seed_add(k0, k1), ck.x0, target);
  return centered_inf_norm(mat_sub(got, direct));
}

const char* to_string(ConstrainSide side) {
  return side == ConstrainSide::kLeft ? "left" : "right";
}

const char* to_string(ConstrainMode mode) {
  return mode == ConstrainMode::kOnes ? "ones" : "zeros";
}

ConstrainSide side_from_string(std::string_view s) {
  if (s == "left") return ConstrainSide::kLeft;
  if (s == "right") return ConstrainSide::kRight;
  throw FormatError("constrain side must be 'left' or 'right'");
}

ConstrainMode mode_from_string(std::string_view s) {
  if (s == "ones") return ConstrainMode::kOnes;
  if (s == "zeros") return ConstrainMode::kZeros;
  throw FormatError("constrain mode must be 'ones' or 'zeros'");
}

}  // namespace kih
