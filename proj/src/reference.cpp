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

#include "kih/reference.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kih/errors.hpp"

namespace kih::ref {

namespace {

// The recursions below re-derive every node value from scratch, so the
// only stack pressure is tree depth. Deep spines belong to the cached
// evaluator; the oracle stays recursive and bounded.
constexpr std::size_t kMaxDepth = 4096;

void check_same_shape(const ModMatrix& a, const ModMatrix& b,
                      const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() ||
      a.modulus() != b.modulus()) {
    throw InvariantError(std::string(what) + ": shape or modulus mismatch");
  }
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

ModMatrix transpose_scalar(const ModMatrix& a) {
  ModMatrix out(a.cols(), a.rows(), a.modulus());
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < a.cols(); ++j) {
      out.set(j, i, a.at(i, j));
    }
  }
  return out;
}

// Row-major 0/1 rows of the gadget preimage of v: block row i*d is all
// zero (pairing with g[0] = 0), block row i*d + k holds bit k-1 of
// v[i][j] for k = 1..d-1.
std::vector<std::uint8_t> decompose_bits(const ModMatrix& v,
                                         std::uint64_t d) {
  const std::uint64_t rows = v.rows() * d;
  const std::uint64_t cols = v.cols();
  std::vector<std::uint8_t> out(rows * cols, 0);
  for (std::uint64_t i = 0; i < v.rows(); ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      const std::uint64_t x = v.at(i, j);
      for (std::uint64_t k = 0; k + 1 < d; ++k) {
        out[(i * d + k + 1) * cols + j] =
            static_cast<std::uint8_t>((x >> k) & 1);
      }
    }
  }
  return out;
}

// a (n x rows) times a 0/1 matrix given as flat rows (rows x cols).
ModMatrix mul_bits(const ModMatrix& a, const std::vector<std::uint8_t>& bits,
                   std::uint64_t rows, std::uint64_t cols) {
  if (a.cols() != rows) {
    throw InvariantError("reference mul_bits: inner dimension mismatch");
  }
  const std::uint64_t m = a.modulus();
  ModMatrix out(a.rows(), cols, m);
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      std::uint64_t acc = 0;
      for (std::uint64_t k = 0; k < rows; ++k) {
        if (bits[k * cols + j] != 0) {
          acc = add_mod(acc, a.at(i, k) % m, m);
        }
      }
      out.set(i, j, acc);
    }
  }
  return out;
}

struct TreeEval {
  const PrfInstance& inst;
  std::array<const ModMatrix*, 3> leaf;

  static std::size_t leaf_index(char c) {
    return c == '0' ? 0 : (c == '1' ? 1 : 2);
  }

  ModMatrix node(FullBinaryTree::NodeId id, std::string_view full,
                 std::size_t depth) const {
    if (depth > kMaxDepth) {
      throw PreconditionError("reference evaluator: tree too deep");
    }
    const FullBinaryTree& tree = inst.tree();
    const std::string_view seg = full.substr(
        tree.leaf_begin(id), tree.leaf_end(id) - tree.leaf_begin(id));
    if (tree.is_leaf(id)) {
      return *leaf[leaf_index(seg[0])];
    }
    const ModMatrix left = node(tree.left(id), full, depth + 1);
    const ModMatrix right = node(tree.right(id), full, depth + 1);
    const ModMatrix& sel = inst.a(seg[0] == '1' ? 1 : 0);
    return ref::mat_add(
        left, mul_bits(sel, decompose_bits(right, inst.params().d),
                       right.rows() * inst.params().d, right.cols()));
  }

  ModMatrix run(std::string_view input) const {
    return node(inst.tree().root(), input, 0);
  }
};

void check_half(const PrfInstance& inst, std::string_view bits,
                const char* what) {
  if (bits.size() != inst.half_len()) {
    throw PreconditionError(std::string(what) + ": wrong input length");
  }
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw PreconditionError(std::string(what) + ": input must be 0/1");
    }
  }
}

}  // namespace

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  a %= m;
  b %= m;
  const std::uint64_t space = m - b;
  return a >= space ? a - space : a + b;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(a % m) * (b % m);
  return static_cast<std::uint64_t>(prod % m);
}

std::uint64_t round_to_p(std::uint64_t x, std::uint64_t q, std::uint64_t p) {
  // Different route than the main library: split p*x at q and round the
  // remainder, instead of evaluating floor((2px + q) / 2q) directly.
  const unsigned __int128 px = static_cast<unsigned __int128>(p) * (x % q);
  std::uint64_t quo = static_cast<std::uint64_t>(px / q);
  const std::uint64_t rem = static_cast<std::uint64_t>(px % q);
  if (rem >= q - rem) {  // 2*rem >= q, without overflow
    ++quo;
  }
  return quo % p;
}

ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b) {
  check_same_shape(a, b, "reference mat_add");
  ModMatrix out(a.rows(), a.cols(), a.modulus());
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < a.cols(); ++j) {
      out.set(i, j, add_mod(a.at(i, j), b.at(i, j), a.modulus()));
    }
  }
  return out;
}

ModMatrix mat_sub(const ModMatrix& a, const ModMatrix& b) {
  check_same_shape(a, b, "reference mat_sub");
  ModMatrix out(a.rows(), a.cols(), a.modulus());
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < a.cols(); ++j) {
      out.set(i, j, sub_mod(a.at(i, j), b.at(i, j), a.modulus()));
    }
  }
  return out;
}

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  if (a.cols() != b.rows() || a.modulus() != b.modulus()) {
    throw InvariantError("reference mat_mul: dimension or modulus mismatch");
  }
  const std::uint64_t m = a.modulus();
  ModMatrix out(a.rows(), b.cols(), m);
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::uint64_t k = 0; k < a.cols(); ++k) {
        acc = add_mod(acc, mul_mod(a.at(i, k), b.at(k, j), m), m);
      }
      out.set(i, j, acc);
    }
  }
  return out;
}

ModMatrix round_matrix(const ModMatrix& a, std::uint64_t p) {
  if (p < 2 || p > a.modulus()) {
    throw PreconditionError("reference round_matrix: need 2 <= p <= q");
  }
  ModMatrix out(a.rows(), a.cols(), p);
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < a.cols(); ++j) {
      out.set(i, j, round_to_p(a.at(i, j), a.modulus(), p));
    }
  }
  return out;
}

std::uint64_t centered_inf_norm(const ModMatrix& a) {
  const std::uint64_t m = a.modulus();
  std::uint64_t best = 0;
  for (std::uint64_t i = 0; i < a.rows(); ++i) {
    for (std::uint64_t j = 0; j < a.cols(); ++j) {
      const std::uint64_t e = a.at(i, j);
      const std::uint64_t mag = e <= m - e ? e : m - e;
      if (mag > best) {
        best = mag;
      }
    }
  }
  return best;
}

ModMatrix eval_a(const PrfInstance& inst, std::string_view bits) {
  check_half(inst, bits, "reference eval_a");
  TreeEval ev{inst, {&inst.a0(), &inst.a1(), nullptr}};
  return ev.run(bits);
}

ModMatrix eval_b(const PrfInstance& inst, const Seed& seed,
                 std::string_view bits) {
  check_half(inst, bits, "reference eval_b");
  const ModMatrix b0 = ref::mat_add(inst.a0(), seed.s);
  const ModMatrix b1 = ref::mat_add(inst.a1(), seed.s);
  TreeEval ev{inst, {&b0, &b1, nullptr}};
  return ev.run(bits);
}

ModMatrix eval_c(const PrfInstance& inst, const Seed& seed,
                 const SymbolString& symbols) {
  if (symbols.size() != inst.half_len()) {
    throw PreconditionError("reference eval_c: wrong input length");
  }
  const ModMatrix b0 = ref::mat_add(inst.a0(), seed.s);
  const ModMatrix b1 = ref::mat_add(inst.a1(), seed.s);
  const ModMatrix c0 = ref::mat_add(inst.a1(), b1);
  const ModMatrix c1 = ref::mat_add(inst.a0(), b1);
  const ModMatrix cz = ref::mat_add(inst.a0(), b0);
  TreeEval ev{inst, {&c0, &c1, &cz}};
  return ev.run(symbols.render());
}

ModMatrix prf_eval(const PrfInstance& inst, const Seed& seed,
                   std::string_view input) {
  const std::size_t half = inst.half_len();
  if (input.size() != 2 * half) {
    throw PreconditionError("reference prf_eval: wrong input length");
  }
  const std::string_view lh = input.substr(0, half);
  const std::string_view rh = input.substr(half);
  const ModMatrix a_t = ref::eval_a(inst, lh);
  const ModMatrix b_t = ref::eval_b(inst, seed, rh);
  const ModMatrix r0 =
      ref::mat_mul(prg_matrix(inst, lh), inst.a(lh[0] == '1' ? 1 : 0));
  const std::uint64_t d = inst.params().d;
  const ModMatrix acc = ref::mat_add(
      ref::mat_mul(transpose_scalar(seed.s), a_t),
      mul_bits(r0, decompose_bits(b_t, d), b_t.rows() * d, b_t.cols()));
  return ref::round_matrix(acc, inst.params().p);
}

ModMatrix prf_eval_prime(const PrfInstance& inst, const Seed& seed,
                         std::string_view z0, const SymbolString& z1) {
  check_half(inst, z0, "reference prf_eval_prime");
  const ModMatrix a_t = ref::eval_a(inst, z0);
  const ModMatrix c_t = ref::eval_c(inst, seed, z1);
  const ModMatrix r0 =
      ref::mat_mul(prg_matrix(inst, z0), inst.a(z0[0] == '1' ? 1 : 0));
  const std::uint64_t d = inst.params().d;
  const ModMatrix acc = ref::mat_add(
      ref::mat_mul(transpose_scalar(seed.s), a_t),
      mul_bits(r0, decompose_bits(c_t, d), c_t.rows() * d, c_t.cols()));
  return ref::round_matrix(acc, inst.params().p);
}

std::uint64_t homomorphism_defect(const PrfInstance& inst, const Seed& s1,
                                  const Seed& s2, std::string_view x,
                                  std::string_view y) {
  const std::size_t half = inst.half_len();
  if (x.size() != 2 * half || y.size() != 2 * half) {
    throw PreconditionError("reference defect: wrong input length");
  }
  if (x.substr(0, half) != y.substr(0, half)) {
    throw PreconditionError("reference defect: left halves must agree");
  }
  std::vector<Symbol> syms;
  syms.reserve(half);
  for (std::size_t i = 0; i < half; ++i) {
    const char a = x[half + i];
    const char b = y[half + i];
    if (a == '1' && b == '1') {
      syms.push_back(Symbol::S0);
    } else if (a == '0' && b == '0') {
      syms.push_back(Symbol::SZ);
    } else {
      syms.push_back(Symbol::S1);
    }
  }
  const Seed sum{ref::mat_add(s1.s, s2.s)};
  const ModMatrix lhs =
      ref::prf_eval_prime(inst, sum, x.substr(0, half), SymbolString(syms));
  const ModMatrix rhs =
      ref::mat_add(ref::prf_eval(inst, s1, x), ref::prf_eval(inst, s2, y));
  return ref::centered_inf_norm(ref::mat_sub(lhs, rhs));
}

Ciphertext ue_upd(const PrfInstance& inst, const UpdateToken& tok,
                  const Ciphertext& c) {
  if (tok.epoch != c.epoch + 1) {
    throw PreconditionError("reference ue_upd: token targets another epoch");
  }
  const ModMatrix mask = ref::prf_eval_prime(inst, tok.dk, c.data_id, tok.dn);
  Ciphertext out = c;
  out.epoch = tok.epoch;
  out.body = ref::mat_sub(c.body, mask);
  return out;
}

}  // namespace kih::ref
