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

#include <cstdint>
#include <vector>

#include "doctest.h"
#include "kih/gadget.hpp"
#include "kih/modmath.hpp"
#include "kih/xof.hpp"

using namespace kih;

namespace {

Params toy() { return Params::make(1, 16, 4, "balanced:2", {'t'}); }
Params desk() {
  return Params::make(4, 1ull << 16, 1ull << 8, "balanced:8", {'d'});
}

}  // namespace

TEST_CASE("gadget vector is (0, 1, 2, ..., 2^(l-1)) with d = l + 1") {
  const GadgetContext ctx(toy());
  const std::vector<std::uint64_t> expect = {0, 1, 2, 4, 8};
  CHECK(std::vector<std::uint64_t>(ctx.g().begin(), ctx.g().end()) == expect);
  CHECK(ctx.G().rows() == 1);
  CHECK(ctx.G().cols() == 5);
  const GadgetContext d(desk());
  CHECK(d.g().size() == 17);
  CHECK(d.g()[0] == 0);
  CHECK(d.g()[16] == (1u << 15));
  // G = I_n (x) g: row i holds g in its own column block.
  CHECK(d.G().rows() == 4);
  CHECK(d.G().cols() == 68);
  CHECK(d.G().at(1, 17 + 3) == 4);
  CHECK(d.G().at(1, 3) == 0);
}

TEST_CASE("scalar decomposition: leading pad slot then binary digits") {
  const GadgetContext ctx(toy());
  CHECK(bit_decompose(0, ctx) ==
        std::vector<std::uint64_t>({0, 0, 0, 0, 0}));
  CHECK(bit_decompose(5, ctx) ==
        std::vector<std::uint64_t>({0, 1, 0, 1, 0}));
  CHECK(bit_decompose(9, ctx) ==
        std::vector<std::uint64_t>({0, 1, 0, 0, 1}));
  CHECK(bit_decompose(15, ctx) ==
        std::vector<std::uint64_t>({0, 1, 1, 1, 1}));
}

TEST_CASE("reconstruction G * decompose(A) == A, exhaustive then random") {
  // Exhaustive over every residue for n = 1, q = 16: place each value
  // in each column of a 1 x nd matrix.
  const Params params = toy();
  const GadgetContext ctx(params);
  for (std::uint64_t a = 0; a < params.q; ++a) {
    ModMatrix m(1, params.nd(), params.q);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      m.set(0, j, (a + j) % params.q);
    }
    CHECK(mat_mul(ctx.G(), mat_decompose(m, ctx)) == m);
  }
  // Random matrices at the larger geometry.
  const Params dp = desk();
  const GadgetContext dctx(dp);
  EntropySource e = EntropySource::from_hex("9e9e");
  for (int i = 0; i < 50; ++i) {
    const ModMatrix m = sample_uniform_matrix(
        dp.n, static_cast<std::size_t>(dp.nd()), dp.q, e);
    CHECK(mat_mul(dctx.G(), mat_decompose(m, dctx)) == m);
  }
}

TEST_CASE("decomposition layout: block rows, bit k at row i*d + k + 1") {
  const Params params = toy();
  const GadgetContext ctx(params);
  ModMatrix m(1, params.nd(), params.q);
  m.set(0, 2, 9);  // 9 = 1 + 8
  const Decomp dec = mat_decompose(m, ctx);
  CHECK(dec.rows() == params.nd());
  CHECK(dec.cols() == params.nd());
  CHECK(dec.at(0, 2) == 0);  // pad slot
  CHECK(dec.at(1, 2) == 1);  // bit 0
  CHECK(dec.at(2, 2) == 0);
  CHECK(dec.at(3, 2) == 0);
  CHECK(dec.at(4, 2) == 1);  // bit 3
}

TEST_CASE("value-level linearity holds; component-wise linearity fails") {
  const Params params = toy();
  const GadgetContext ctx(params);
  // <g, g^-1(a) + g^-1(b)> == a + b (mod q) for all pairs, and the
  // unreduced inner product stays below 2^(l+1).
  for (std::uint64_t a = 0; a < params.q; ++a) {
    for (std::uint64_t b = 0; b < params.q; ++b) {
      const auto da = bit_decompose(a, ctx);
      const auto db = bit_decompose(b, ctx);
      std::vector<std::uint64_t> sum(da.size());
      for (std::size_t i = 0; i < da.size(); ++i) {
        sum[i] = da[i] + db[i];
      }
      const unsigned __int128 inner = gadget_inner_unreduced(ctx, sum);
      CHECK(static_cast<std::uint64_t>(inner % params.q) ==
            (a + b) % params.q);
      CHECK(inner < (static_cast<unsigned __int128>(1) << (params.l + 1)));
    }
  }
  // The counterexample that separates the two readings: as vectors,
  // g^-1(1) + g^-1(1) has a 2 where g^-1(2) has bits.
  const auto one = bit_decompose(1, ctx);
  const auto two = bit_decompose(2, ctx);
  std::vector<std::uint64_t> doubled(one.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    doubled[i] = 2 * one[i];
  }
  CHECK(doubled != two);
  CHECK(gadget_inner_unreduced(ctx, doubled) ==
        gadget_inner_unreduced(ctx, two));
}

TEST_CASE("decomp_add accumulates over Z without reduction") {
  const Params params = toy();
  const GadgetContext ctx(params);
  ModMatrix m(1, params.nd(), params.q);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    m.set(0, j, 15);
  }
  const Decomp d = mat_decompose(m, ctx);
  const Decomp s = decomp_add(decomp_add(d, d), d);
  for (std::size_t r = 1; r < s.rows(); ++r) {
    for (std::size_t c = 0; c < s.cols(); ++c) {
      CHECK(s.at(r, c) == 3);  // three stacked one-bits, unreduced
    }
  }
}

TEST_CASE("left-multiplying a decomposition matches the lifted product") {
  const Params params = desk();
  const GadgetContext ctx(params);
  EntropySource e = EntropySource::from_hex("c3c3");
  const ModMatrix a = sample_uniform_matrix(
      params.n, static_cast<std::size_t>(params.nd()), params.q, e);
  const ModMatrix b = sample_uniform_matrix(
      params.n, static_cast<std::size_t>(params.nd()), params.q, e);
  const Decomp db = mat_decompose(b, ctx);
  // Lift the decomposition into a ModMatrix and compare products.
  ModMatrix lifted(db.rows(), db.cols(), params.q);
  for (std::size_t r = 0; r < db.rows(); ++r) {
    for (std::size_t c = 0; c < db.cols(); ++c) {
      lifted.set(r, c, db.at(r, c) % params.q);
    }
  }
  CHECK(mat_mul(a, db) == mat_mul(a, lifted));
}
