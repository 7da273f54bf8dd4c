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

#include "kih/gadget.hpp"

#include "kih/errors.hpp"

namespace kih {

Decomp::Decomp(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw InvariantError("Decomp: dimensions must be positive");
  }
  const std::uint64_t count =
      static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  if (count > (1ull << 27) || count / rows != cols) {
    throw InvariantError("Decomp: entry count exceeds resource guard");
  }
  entries_.assign(static_cast<std::size_t>(count), 0);
}

GadgetContext::GadgetContext(const Params& params) : params_(params) {
  g_.assign(params.d, 0);
  for (std::uint32_t i = 1; i <= params.l; ++i) {
    // 2^(i-1) < q for every i <= l, so no reduction is needed.
    g_[i] = 1ull << (i - 1);
  }
  G_ = ModMatrix(params.n, params.nd(), params.q);
  for (std::uint32_t block = 0; block < params.n; ++block) {
    for (std::uint32_t i = 0; i < params.d; ++i) {
      G_.set(block, static_cast<std::size_t>(block) * params.d + i, g_[i]);
    }
  }
}

std::vector<std::uint64_t> bit_decompose(std::uint64_t a,
                                         const GadgetContext& ctx) {
  const Params& params = ctx.params();
  if (a >= params.q) {
    throw PreconditionError("bit_decompose: value not reduced mod q");
  }
  std::vector<std::uint64_t> out(params.d, 0);
  for (std::uint32_t i = 0; i < params.l; ++i) {
    out[i + 1] = (a >> i) & 1;
  }
  return out;
}

Decomp mat_decompose(const ModMatrix& a, const GadgetContext& ctx) {
  const Params& params = ctx.params();
  if (a.rows() != params.n) {
    throw InvariantError("mat_decompose: row count must equal n");
  }
  if (a.modulus() != params.q) {
    throw InvariantError("mat_decompose: modulus must equal q");
  }
  const std::size_t d = params.d;
  const std::size_t cols = a.cols();
  Decomp out(static_cast<std::size_t>(params.n) * d, cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::uint64_t value = a.at(i, j);
      // Block row i*d holds (0, bits of value); slot 0 stays zero.
      for (std::uint32_t bit = 0; bit < params.l; ++bit) {
        out.set(i * d + bit + 1, j, (value >> bit) & 1);
      }
    }
  }
  return out;
}

Decomp decomp_add(const Decomp& a, const Decomp& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvariantError("decomp_add: shape mismatch");
  }
  Decomp out(a.rows(), a.cols());
  const std::size_t count = a.entries().size();
  for (std::size_t i = 0; i < count; ++i) {
    // Integer addition, deliberately unreduced.
    out.set(i / a.cols(), i % a.cols(), a.entries()[i] + b.entries()[i]);
  }
  return out;
}

ModMatrix mat_mul(const ModMatrix& a, const Decomp& d) {
  if (a.cols() != d.rows()) {
    throw InvariantError("mat_mul: inner dimension mismatch");
  }
  // Lift the integer entries into Z_modulus, then reuse the modular
  // kernel. Lifting commutes with the final reduction.
  const std::uint64_t m = a.modulus();
  std::vector<std::uint64_t> lifted(d.entries().begin(), d.entries().end());
  for (std::uint64_t& e : lifted) {
    e %= m;
  }
  return mat_mul(a, ModMatrix::from_entries(d.rows(), d.cols(), m,
                                            std::move(lifted)));
}

unsigned __int128 gadget_inner_unreduced(const GadgetContext& ctx,
                                         std::span<const std::uint64_t> v) {
  if (v.size() != ctx.params().d) {
    throw InvariantError("gadget_inner_unreduced: expected a length-d vector");
  }
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += static_cast<unsigned __int128>(ctx.g()[i]) * v[i];
  }
  return acc;
}

}  // namespace kih
