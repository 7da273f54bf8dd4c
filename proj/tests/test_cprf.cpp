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

#include <string>

#include "doctest.h"
#include "kih/cprf.hpp"
#include "kih/errors.hpp"
#include "kih/presets.hpp"
#include "kih/reference.hpp"

using namespace kih;

namespace {

struct Fixture {
  PrfInstance inst;
  Seed k0;
  Seed k1;

  static Fixture toy() {
    const Params params = preset_by_name("TOY").params;
    EntropySource e = EntropySource::from_hex("c0ffee");
    PrfInstance inst = sample_instance(params, e);
    Seed k0 = keygen(params, e);
    Seed k1 = keygen(params, e);
    return {std::move(inst), std::move(k0), std::move(k1)};
  }
};

}  // namespace

TEST_CASE("constrain pins the padded evaluation and the metadata") {
  const Fixture f = Fixture::toy();
  const ConstrainedKey ck =
      constrain(f.inst, f.k0, "10", ConstrainSide::kLeft, ConstrainMode::kOnes);
  CHECK(ck.side == ConstrainSide::kLeft);
  CHECK(ck.mode == ConstrainMode::kOnes);
  CHECK(ck.x0 == "10");
  CHECK(ck.instance == f.inst.digest());
  CHECK(ck.value == prf_eval(f.inst, f.k0, "1011"));
  CHECK(ck.value == ref::prf_eval(f.inst, f.k0, "1011"));

  CHECK(constrain(f.inst, f.k0, "10", ConstrainSide::kRight,
                  ConstrainMode::kOnes)
            .value == prf_eval(f.inst, f.k0, "1110"));
  CHECK(constrain(f.inst, f.k0, "10", ConstrainSide::kLeft,
                  ConstrainMode::kZeros)
            .value == prf_eval(f.inst, f.k0, "1000"));
  CHECK(constrain(f.inst, f.k0, "10", ConstrainSide::kRight,
                  ConstrainMode::kZeros)
            .value == prf_eval(f.inst, f.k0, "0010"));
}

TEST_CASE("ones mode: evaluation identity and target bijection") {
  const Fixture f = Fixture::toy();
  for (const char* side_name : {"left", "right"}) {
    const ConstrainSide side = side_from_string(side_name);
    const ConstrainedKey ck =
        constrain(f.inst, f.k0, "01", side, ConstrainMode::kOnes);
    for (const char* x1 : {"00", "01", "10", "11"}) {
      // The inverted free half drives the combined evaluation.
      std::string x1prime(x1);
      for (char& c : x1prime) c = c == '0' ? '1' : '0';
      const std::string assembled = side == ConstrainSide::kLeft
                                        ? ck.x0 + x1prime
                                        : x1prime + ck.x0;
      const ModMatrix expect = combine(ref::prf_eval(f.inst, f.k1, assembled),
                                       ref::prf_eval(f.inst, f.k0,
                                                     side == ConstrainSide::kLeft
                                                         ? ck.x0 + "11"
                                                         : "11" + ck.x0));
      CHECK(eval_constrained(f.inst, ck, f.k1, x1) == expect);
      // Against all-ones padding the almost-XOR of the inverted target
      // reproduces the target bits exactly: the map is a bijection.
      CHECK(almost_xor(x1prime, "11") == SymbolString::from_bits(x1));
      CHECK(claimed_target_symbols(ck, x1) == SymbolString::from_bits(x1));
    }
  }
}

TEST_CASE("zeros mode: symbol targets, reachable alphabet {S1, SZ}") {
  const Fixture f = Fixture::toy();
  const ConstrainedKey ck =
      constrain(f.inst, f.k0, "11", ConstrainSide::kLeft, ConstrainMode::kZeros);
  for (const char* target_text : {"ZZ", "Z1", "1Z", "11"}) {
    const SymbolString target = SymbolString::parse(target_text);
    // S1 -> free bit 1, SZ -> free bit 0.
    std::string x1prime;
    for (Symbol s : target.symbols()) {
      x1prime.push_back(s == Symbol::S1 ? '1' : '0');
    }
    CHECK(almost_xor(x1prime, "00") == target);
    const ModMatrix expect =
        combine(ref::prf_eval(f.inst, f.k1, ck.x0 + x1prime), ck.value);
    CHECK(eval_constrained_symbols(f.inst, ck, f.k1, target) == expect);
    CHECK(claimed_target_symbols(ck, target_text) == target);
  }
  // S0 needs a 1 in the padding; it is rejected, not remapped.
  CHECK_THROWS_AS((void)eval_constrained_symbols(f.inst, ck, f.k1,
                                                 SymbolString::parse("0Z")),
                  PreconditionError);
  CHECK_THROWS_AS((void)claimed_target_symbols(ck, "0Z"), PreconditionError);
}

TEST_CASE("mode dispatch is strict") {
  const Fixture f = Fixture::toy();
  const ConstrainedKey ones =
      constrain(f.inst, f.k0, "10", ConstrainSide::kLeft, ConstrainMode::kOnes);
  const ConstrainedKey zeros =
      constrain(f.inst, f.k0, "10", ConstrainSide::kLeft, ConstrainMode::kZeros);
  CHECK_THROWS_AS((void)eval_constrained(f.inst, zeros, f.k1, "01"),
                  PreconditionError);
  CHECK_THROWS_AS((void)eval_constrained_symbols(f.inst, ones, f.k1,
                                                 SymbolString::parse("1Z")),
                  PreconditionError);
}

TEST_CASE("constrained keys are bound to their instance") {
  const Fixture f = Fixture::toy();
  ConstrainedKey ck =
      constrain(f.inst, f.k0, "10", ConstrainSide::kLeft, ConstrainMode::kOnes);
  EntropySource other = EntropySource::from_hex("0dd0ba11");
  const PrfInstance inst2 = sample_instance(f.inst.params(), other);
  CHECK_FALSE(inst2.digest() == f.inst.digest());
  CHECK_THROWS_AS((void)eval_constrained(inst2, ck, f.k1, "01"),
                  PreconditionError);
  // Tampered pinned value trips the shape invariant.
  ck.value = ModMatrix(1, 1, 4);
  CHECK_THROWS_AS((void)eval_constrained(f.inst, ck, f.k1, "01"),
                  InvariantError);
}

TEST_CASE("input validation") {
  const Fixture f = Fixture::toy();
  CHECK_THROWS_AS((void)constrain(f.inst, f.k0, "1", ConstrainSide::kLeft,
                                  ConstrainMode::kOnes),
                  PreconditionError);
  CHECK_THROWS_AS((void)constrain(f.inst, f.k0, "1x", ConstrainSide::kLeft,
                                  ConstrainMode::kOnes),
                  PreconditionError);
  const ConstrainedKey ck =
      constrain(f.inst, f.k0, "10", ConstrainSide::kLeft, ConstrainMode::kOnes);
  CHECK_THROWS_AS((void)eval_constrained(f.inst, ck, f.k1, "011"),
                  PreconditionError);
  const ConstrainedKey zk =
      constrain(f.inst, f.k0, "10", ConstrainSide::kLeft, ConstrainMode::kZeros);
  CHECK_THROWS_AS((void)eval_constrained_symbols(f.inst, zk, f.k1,
                                                 SymbolString::parse("1")),
                  PreconditionError);
}

TEST_CASE("constrained defect matches its definition") {
  const Fixture f = Fixture::toy();
  const Seed ksum = seed_add(f.k0, f.k1);
  const ConstrainedKey ck =
      constrain(f.inst, f.k0, "01", ConstrainSide::kLeft, ConstrainMode::kOnes);
  for (const char* x1 : {"00", "01", "10", "11"}) {
    const ModMatrix got = eval_constrained(f.inst, ck, f.k1, x1);
    const ModMatrix direct = ref::prf_eval_prime(f.inst, ksum, ck.x0,
                                                 SymbolString::from_bits(x1));
    CHECK(constrained_defect(f.inst, ck, f.k0, f.k1, x1) ==
          centered_inf_norm(mat_sub(got, direct)));
  }
  const ConstrainedKey zk =
      constrain(f.inst, f.k0, "01", ConstrainSide::kLeft, ConstrainMode::kZeros);
  const SymbolString target = SymbolString::parse("1Z");
  const ModMatrix got = eval_constrained_symbols(f.inst, zk, f.k1, target);
  const ModMatrix direct = ref::prf_eval_prime(f.inst, ksum, zk.x0, target);
  CHECK(constrained_defect_symbols(f.inst, zk, f.k0, f.k1, target) ==
        centered_inf_norm(mat_sub(got, direct)));
}

TEST_CASE("side and mode names round-trip") {
  CHECK(side_from_string(to_string(ConstrainSide::kLeft)) ==
        ConstrainSide::kLeft);
  CHECK(side_from_string(to_string(ConstrainSide::kRight)) ==
        ConstrainSide::kRight);
  CHECK(mode_from_string(to_string(ConstrainMode::kOnes)) ==
        ConstrainMode::kOnes);
  CHECK(mode_from_string(to_string(ConstrainMode::kZeros)) ==
        ConstrainMode::kZeros);
  CHECK_THROWS_AS((void)side_from_string("up"), FormatError);
  CHECK_THROWS_AS((void)mode_from_string("twos"), FormatError);
}
