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

#include "kih/modmath.hpp"

#include <bit>
#include <cstdint>
#include <utility>

#include "kih/errors.hpp"

namespace kih {

namespace {

// Entry budget: dense matrices above this are a configuration mistake,
// not a workload (the largest preset needs ~2.8e5 entries).
constexpr std::uint64_t kMaxEntries = 1ull << 27;

// Threshold below which forking threads costs more than the loop.
constexpr std::uint64_t kParallelGrain = 1ull << 16;

void check_same_shape(const ModMatrix& a, const ModMatrix& b,
                      const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvariantError(std::string(op) + ": dimension mismatch");
  }
  if (a.modulus() != b.modulus()) {
    throw InvariantError(std::string(op) + ": modulus mismatch");
  }
}

}  // namespace

Params Params::make(std::uint32_t n, std::uint64_t q, std::uint64_t p,
                    std::string tree_desc,
                    std::vector<std::uint8_t> prg_salt) {
  if (n < 1) {
    throw InvariantError("Params: n must be >= 1");
  }
  if (q < 2) {
    throw InvariantError("Params: q must be >= 2");
  }
  if (p < 2 || p > q) {
    throw InvariantError("Params: need 2 <= p <= q");
  }
  Params params;
  params.n = n;
  params.q = q;
  params.p = p;
  // ceil(log2 q): position of the highest bit of q-1, and q=2^l exactly
  // when q is a power of two.
  params.l = static_cast<std::uint32_t>(std::bit_width(q - 1));
  params.d = params.l + 1;
  params.tree_desc = std::move(tree_desc);
  params.prg_salt = std::move(prg_salt);
  if (params.nd() > (1ull << 20)) {
    throw InvariantError("Params: n*d exceeds the resource guard 2^20");
  }
  return params;
}

ModMatrix::ModMatrix(std::size_t rows, std::size_t cols,
                     std::uint64_t modulus)
    : rows_(rows), cols_(cols), modulus_(modulus) {
  if (rows == 0 || cols == 0) {
    throw InvariantError("ModMatrix: dimensions must be positive");
  }
  if (modulus < 2) {
    throw InvariantError("ModMatrix: modulus must be >= 2");
  }
  const std::uint64_t count =
      static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  if (count > kMaxEntries || count / rows != cols) {
    throw InvariantError("ModMatrix: entry count exceeds resource guard");
  }
  entries_.assign(static_cast<std::size_t>(count), 0);
}

ModMatrix ModMatrix::from_entries(std::size_t rows, std::size_t cols,
                                  std::uint64_t modulus,
                                  std::vector<std::uint64_t> entries) {
  ModMatrix m(rows, cols, modulus);
  if (entries.size() != m.entries_.size()) {
    throw InvariantError("ModMatrix: entry count does not match dimensions");
  }
  for (std::uint64_t e : entries) {
    if (e >= modulus) {
      throw InvariantError("ModMatrix: entry not reduced mod modulus");
    }
  }
  m.entries_ = std::move(entries);
  return m;
}

ModMatrix ModMatrix::identity(std::size_t n, std::uint64_t modulus) {
  ModMatrix m(n, n, modulus);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, 1);
  }
  return m;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  // a, b < m <= 2^64; avoid overflow by subtracting first.
  const std::uint64_t space = m - b;
  return a >= space ? a - space : a + b;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  if (std::has_single_bit(m)) {
    return (a * b) & (m - 1);
  }
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b) {
  check_same_shape(a, b, "mat_add");
  ModMatrix out(a.rows(), a.cols(), a.modulus());
  const std::uint64_t m = a.modulus();
  const std::uint64_t* pa = a.entries().data();
  const std::uint64_t* pb = b.entries().data();
  std::uint64_t* po = out.mutable_entries().data();
  const std::int64_t count = static_cast<std::int64_t>(a.entries().size());
#pragma omp parallel for if (count >= static_cast<std::int64_t>(kParallelGrain)) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    po[i] = add_mod(pa[i], pb[i], m);
  }
  return out;
}

ModMatrix mat_sub(const ModMatrix& a, const ModMatrix& b) {
  check_same_shape(a, b, "mat_sub");
  ModMatrix out(a.rows(), a.cols(), a.modulus());
  const std::uint64_t m = a.modulus();
  const std::uint64_t* pa = a.entries().data();
  const std::uint64_t* pb = b.entries().data();
  std::uint64_t* po = out.mutable_entries().data();
  const std::int64_t count = static_cast<std::int64_t>(a.entries().size());
#pragma omp parallel for if (count >= static_cast<std::int64_t>(kParallelGrain)) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    po[i] = sub_mod(pa[i], pb[i], m);
  }
  return out;
}

ModMatrix mat_scale(const ModMatrix& a, std::uint64_t k) {
  ModMatrix out(a.rows(), a.cols(), a.modulus());
  const std::uint64_t m = a.modulus();
  const std::uint64_t kr = k % m;
  const std::uint64_t* pa = a.entries().data();
  std::uint64_t* po = out.mutable_entries().data();
  const std::int64_t count = static_cast<std::int64_t>(a.entries().size());
#pragma omp parallel for if (count >= static_cast<std::int64_t>(kParallelGrain)) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    po[i] = mul_mod(pa[i], kr, m);
  }
  return out;
}

ModMatrix mat_neg(const ModMatrix& a) {
  ModMatrix out(a.rows(), a.cols(), a.modulus());
  const std::uint64_t m = a.modulus();
  const std::uint64_t* pa = a.entries().data();
  std::uint64_t* po = out.mutable_entries().data();
  const std::int64_t count = static_cast<std::int64_t>(a.entries().size());
  for (std::int64_t i = 0; i < count; ++i) {
    po[i] = pa[i] == 0 ? 0 : m - pa[i];
  }
  return out;
}

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvariantError("mat_mul: inner dimension mismatch");
  }
  if (a.modulus() != b.modulus()) {
    throw InvariantError("mat_mul: modulus mismatch");
  }
  const std::uint64_t m = a.modulus();
  const std::int64_t rows = static_cast<std::int64_t>(a.rows());
  const std::size_t cols = b.cols();
  const std::size_t inner = a.cols();
  ModMatrix out(a.rows(), cols, m);
  const std::uint64_t* pa = a.entries().data();
  const std::uint64_t* pb = b.entries().data();
  std::uint64_t* po = out.mutable_entries().data();
  [[maybe_unused]] const bool big =
      static_cast<std::uint64_t>(rows) * cols * inner >= kParallelGrain;

  if (std::has_single_bit(m)) {
    // Power-of-two modulus: wrapping accumulation, one mask at the end.
    const std::uint64_t mask = m - 1;
#pragma omp parallel for if (big) schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      std::uint64_t* orow = po + static_cast<std::size_t>(i) * cols;
      const std::uint64_t* arow = pa + static_cast<std::size_t>(i) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        const std::uint64_t av = arow[k];
        if (av == 0) continue;
        const std::uint64_t* brow = pb + k * cols;
        for (std::size_t j = 0; j < cols; ++j) {
          orow[j] += av * brow[j];
        }
      }
      for (std::size_t j = 0; j < cols; ++j) {
        orow[j] &= mask;
      }
    }
  } else if (m <= (1ull << 32)) {
    // Products fit 64 bits; accumulate in 128 and reduce once per entry.
#pragma omp parallel for if (big) schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      std::vector<unsigned __int128> acc(cols, 0);
      const std::uint64_t* arow = pa + static_cast<std::size_t>(i) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        const std::uint64_t av = arow[k];
        if (av == 0) continue;
        const std::uint64_t* brow = pb + k * cols;
        for (std::size_t j = 0; j < cols; ++j) {
          acc[j] += av * brow[j];
        }
      }
      std::uint64_t* orow = po + static_cast<std::size_t>(i) * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        orow[j] = static_cast<std::uint64_t>(acc[j] % m);
      }
    }
  } else {
    // Wide modulus: 128-bit product with per-step reduction.
#pragma omp parallel for if (big) schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      std::uint64_t* orow = po + static_cast<std::size_t>(i) * cols;
      const std::uint64_t* arow = pa + static_cast<std::size_t>(i) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        const std::uint64_t av = arow[k];
        if (av == 0) continue;
        const std::uint64_t* brow = pb + k * cols;
        for (std::size_t j = 0; j < cols; ++j) {
          const std::uint64_t prod = static_cast<std::uint64_t>(
              static_cast<unsigned __int128>(av) * brow[j] % m);
          orow[j] = add_mod(orow[j], prod, m);
        }
      }
    }
  }
  return out;
}

ModMatrix transpose(const ModMatrix& a) {
  ModMatrix out(a.cols(), a.rows(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.set(j, i, a.at(i, j));
    }
  }
  return out;
}

std::uint64_t round_to_p(std::uint64_t x, std::uint64_t q, std::uint64_t p) {
  // floor((2px + q) / 2q) realizes round-half-up of p*x/q exactly in
  // integers; the quotient is at most p, which wraps to 0 mod p.
  const unsigned __int128 num =
      2 * static_cast<unsigned __int128>(p) * x + q;
  const unsigned __int128 den = 2 * static_cast<unsigned __int128>(q);
  return static_cast<std::uint64_t>((num / den) % p);
}

ModMatrix round_matrix(const ModMatrix& a, std::uint64_t p) {
  if (p < 2 || p > a.modulus()) {
    throw InvariantError("round_matrix: need 2 <= p <= modulus");
  }
  const std::uint64_t q = a.modulus();
  ModMatrix out(a.rows(), a.cols(), p);
  const std::uint64_t* pa = a.entries().data();
  std::uint64_t* po = out.mutable_entries().data();
  const std::int64_t count = static_cast<std::int64_t>(a.entries().size());
#pragma omp parallel for if (count >= static_cast<std::int64_t>(kParallelGrain)) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    po[i] = round_to_p(pa[i], q, p);
  }
  return out;
}

std::uint64_t centered_abs(std::uint64_t e, std::uint64_t m) {
  // Lift into (-m/2, m/2]: values at most m/2 keep their sign.
  if (e <= m - e) {
    return e;
  }
  return m - e;
}

std::uint64_t centered_inf_norm(const ModMatrix& a) {
  const std::uint64_t m = a.modulus();
  std::uint64_t best = 0;
  for (std::uint64_t e : a.entries()) {
    best = std::max(best, centered_abs(e, m));
  }
  return best;
}

ModMatrix sample_uniform_matrix(std::size_t rows, std::size_t cols,
                                std::uint64_t modulus,
                                EntropySource& entropy) {
  // Row-major draw order is part of the replay contract; do not
  // parallelize.
  ModMatrix out(rows, cols, modulus);
  std::uint64_t* po = out.mutable_entries().data();
  const std::size_t count = out.entries().size();
  for (std::size_t i = 0; i < count; ++i) {
    po[i] = entropy.uniform(modulus);
  }
  return out;
}

}  // namespace kih
