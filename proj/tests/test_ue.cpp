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
#include <string>

#include "doctest.h"
#include "kih/errors.hpp"
#include "kih/presets.hpp"
#include "kih/reference.hpp"
#include "kih/ue.hpp"

using namespace kih;

namespace {

struct Fixture {
  PrfInstance inst;
  EpochKey key;

  static Fixture make(const char* preset, const char* hex) {
    const Params params = preset_by_name(preset).params;
    EntropySource e = EntropySource::from_hex(hex);
    PrfInstance inst = sample_instance(params, e);
    EpochKey key = ue_setup(inst, e);
    return {std::move(inst), std::move(key)};
  }
};

ModMatrix random_matrix(const PrfInstance& inst, std::uint64_t modulus,
                        EntropySource& e) {
  const std::uint64_t nd = inst.params().nd();
  return sample_uniform_matrix(nd, nd, modulus, e);
}

std::string random_id(const PrfInstance& inst, EntropySource& e) {
  return e.bits(inst.half_len());
}

}  // namespace

TEST_CASE("setup: epoch zero, well-formed nonce, deterministic") {
  const Fixture f = Fixture::make("TOY", "aa00");
  CHECK(f.key.epoch == 0);
  CHECK(f.key.nonce.size() == f.inst.half_len());
  for (char c : f.key.nonce) CHECK((c == '0' || c == '1'));
  CHECK(f.key.k.s.rows() == 1);
  CHECK(f.key.k.s.cols() == f.inst.params().nd());
  const Fixture again = Fixture::make("TOY", "aa00");
  CHECK(again.key == f.key);
}

TEST_CASE("encryption is the pad plus the encoded message") {
  const Fixture f = Fixture::make("TOY", "bb01");
  EntropySource e = EntropySource::from_hex("11");
  const Message m = Message::raw(random_matrix(f.inst, 4, e));
  const std::string id = random_id(f.inst, e);
  const Ciphertext c = ue_enc(f.inst, f.key, m, id);
  CHECK(c.epoch == 0);
  CHECK(c.data_id == id);
  CHECK(c.mode == MsgMode::kRaw);
  CHECK(c.t == 0);
  const ModMatrix pad = ref::prf_eval_prime(
      f.inst, f.key.k, id, SymbolString::from_bits(f.key.nonce));
  CHECK(c.body == mat_add(pad, m.data));
}

TEST_CASE("raw round trip at both presets") {
  for (const char* preset : {"TOY", "DESK"}) {
    const Fixture f = Fixture::make(preset, "cc02");
    EntropySource e = EntropySource::from_hex("22");
    for (int i = 0; i < 10; ++i) {
      const Message m =
          Message::raw(random_matrix(f.inst, f.inst.params().p, e));
      const Ciphertext c = ue_enc(f.inst, f.key, m, random_id(f.inst, e));
      CHECK(ue_dec(f.inst, f.key, c) == m);
    }
  }
}

TEST_CASE("robust round trip") {
  const Fixture f = Fixture::make("DESK", "dd03");
  EntropySource e = EntropySource::from_hex("33");
  for (const std::uint64_t t : {2ull, 16ull, 64ull}) {
    const Message m = Message::robust(t, random_matrix(f.inst, t, e));
    const Ciphertext c = ue_enc(f.inst, f.key, m, random_id(f.inst, e));
    CHECK(c.mode == MsgMode::kRobust);
    CHECK(c.t == t);
    CHECK(ue_dec(f.inst, f.key, c) == m);
  }
}

TEST_CASE("robust encoding and wrap-aware decode") {
  // p = 16, t = 2: embedded points {0, 8}, step 8, error budget < 4.
  ModMatrix data(1, 2, 2);
  data.set(0, 0, 0);
  data.set(0, 1, 1);
  const Message m = Message::robust(2, data);
  const ModMatrix enc = encode_message(m, 16);
  CHECK(enc.at(0, 0) == 0);
  CHECK(enc.at(0, 1) == 8);
  CHECK(enc.modulus() == 16);

  for (std::uint64_t noise : {0ull, 1ull, 3ull}) {
    ModMatrix perturbed(1, 2, 16);
    perturbed.set(0, 0, (0 + noise) % 16);
    perturbed.set(0, 1, (8 + 16 - noise) % 16);
    CHECK(decode_message(perturbed, MsgMode::kRobust, 2) == m);
  }
  // 15 = 0 - 1 mod 16 sits on the wrap side of the zero point.
  ModMatrix wrapped(1, 2, 16);
  wrapped.set(0, 0, 15);
  wrapped.set(0, 1, 8);
  CHECK(decode_message(wrapped, MsgMode::kRobust, 2).data.at(0, 0) == 0);
  // Error equal to half the step destroys integrity.
  ModMatrix bad(1, 2, 16);
  bad.set(0, 0, 4);
  bad.set(0, 1, 8);
  CHECK_THROWS_AS((void)decode_message(bad, MsgMode::kRobust, 2),
                  InvariantError);
  // Raw decode is the identity and never throws.
  CHECK(decode_message(bad, MsgMode::kRaw, 0).data == bad);
}

TEST_CASE("message and mode preconditions") {
  const Fixture f = Fixture::make("TOY", "ee04");
  EntropySource e = EntropySource::from_hex("44");
  CHECK_THROWS_AS((void)Message::robust(1, ModMatrix(1, 1, 2)),
                  PreconditionError);
  CHECK_THROWS_AS((void)Message::robust(4, ModMatrix(1, 1, 8)),
                  PreconditionError);
  // TOY has p = 4: no t satisfies 2 <= t <= p/4, so robust encryption
  // is unavailable at this preset.
  const Message m = Message::robust(2, random_matrix(f.inst, 2, e));
  CHECK_THROWS_AS((void)ue_enc(f.inst, f.key, m, random_id(f.inst, e)),
                  PreconditionError);
  CHECK_THROWS_AS((void)encode_message(m, 4), PreconditionError);
  CHECK_THROWS_AS(
      (void)decode_message(ModMatrix(1, 1, 4), MsgMode::kRobust, 2),
      PreconditionError);
  // Raw data must already live mod p.
  const Message wrong = Message::raw(random_matrix(f.inst, 16, e));
  CHECK_THROWS_AS((void)ue_enc(f.inst, f.key, wrong, random_id(f.inst, e)),
                  PreconditionError);
  // Shape is checked against the instance.
  const Message small = Message::raw(ModMatrix(1, 1, 4));
  CHECK_THROWS_AS((void)ue_enc(f.inst, f.key, small, random_id(f.inst, e)),
                  PreconditionError);
  // data_id must be |T| bits.
  const Message ok = Message::raw(random_matrix(f.inst, 4, e));
  CHECK_THROWS_AS((void)ue_enc(f.inst, f.key, ok, "1"), PreconditionError);
  CHECK_THROWS_AS((void)ue_enc(f.inst, f.key, ok, "1x"), PreconditionError);
}

TEST_CASE("epoch discipline") {
  const Fixture f = Fixture::make("TOY", "ff05");
  EntropySource e = EntropySource::from_hex("55");
  const Message m = Message::raw(random_matrix(f.inst, 4, e));
  const Ciphertext c = ue_enc(f.inst, f.key, m, random_id(f.inst, e));
  auto [next, tok] = ue_next(f.inst, f.key, e);
  CHECK(next.epoch == 1);
  CHECK(tok.epoch == 1);
  // Stale key cannot decrypt a rotated ciphertext and vice versa.
  const Ciphertext c1 = ue_upd(f.inst, tok, c);
  CHECK(c1.epoch == 1);
  CHECK_THROWS_AS((void)ue_dec(f.inst, f.key, c1), PreconditionError);
  CHECK_THROWS_AS((void)ue_dec(f.inst, next, c), PreconditionError);
  // A token only moves ciphertexts of the directly preceding epoch.
  CHECK_THROWS_AS((void)ue_upd(f.inst, tok, c1), PreconditionError);
  // Tampered token geometry trips the invariant.
  UpdateToken broken = tok;
  broken.dn = SymbolString::parse("1");
  CHECK_THROWS_AS((void)ue_upd(f.inst, broken, c), InvariantError);
}

TEST_CASE("key chain: token and successor key recover the outgoing seed") {
  const Fixture f = Fixture::make("DESK", "a106");
  EntropySource e = EntropySource::from_hex("66");
  EpochKey cur = f.key;
  for (int i = 0; i < 20; ++i) {
    const auto [next, tok] = ue_next(f.inst, cur, e);
    CHECK(next.epoch == cur.epoch + 1);
    CHECK(tok.epoch == next.epoch);
    CHECK(seed_add(next.k, tok.dk) == cur.k);
    CHECK(tok.dn == almost_xor(cur.nonce, next.nonce));
    CHECK(tok.dn.size() == f.inst.half_len());
    cur = next;
  }
}

TEST_CASE("update is the literal token-pad subtraction") {
  const Fixture f = Fixture::make("TOY", "b207");
  EntropySource e = EntropySource::from_hex("77");
  const Message m = Message::raw(random_matrix(f.inst, 4, e));
  const Ciphertext c = ue_enc(f.inst, f.key, m, random_id(f.inst, e));
  auto [next, tok] = ue_next(f.inst, f.key, e);
  const Ciphertext c1 = ue_upd(f.inst, tok, c);
  CHECK(c1.body ==
        mat_sub(c.body, prf_eval_prime(f.inst, tok.dk, c.data_id, tok.dn)));
  CHECK(c1 == ref::ue_upd(f.inst, tok, c));
  CHECK(c1.data_id == c.data_id);
  CHECK(c1.mode == c.mode);
  CHECK(c1.t == c.t);

  // The post-rotation decryption shift is a measured quantity: library
  // and straight-line reference must agree on it exactly.
  const Message got = ue_dec(f.inst, next, c1);
  const ModMatrix lib_shift = mat_sub(got.data, m.data);
  const ModMatrix pad_old = ref::prf_eval_prime(
      f.inst, f.key.k, c.data_id, SymbolString::from_bits(f.key.nonce));
  const ModMatrix pad_tok =
      ref::prf_eval_prime(f.inst, tok.dk, c.data_id, tok.dn);
  const ModMatrix pad_new = ref::prf_eval_prime(
      f.inst, next.k, c.data_id, SymbolString::from_bits(next.nonce));
  CHECK(lib_shift == mat_sub(mat_sub(pad_old, pad_tok), pad_new));
}
